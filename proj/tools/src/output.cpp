#include "salvo_cli/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "salvo/error.hpp"

namespace salvo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_timeseries(std::ostream& os, const SimLog& log, int every) {
    if (every < 1) every = 1;
    os << csv_header << '\n';
    std::string line;
    for (std::size_t k = 0; k < log.samples(); k += static_cast<std::size_t>(every)) {
        for (int i = 0; i < log.n; ++i) {
            const Sample& s = log.at(k, i);
            line.clear();
            line += format_double(log.t[k]);
            line += ',';
            line += std::to_string(i + 1);
            for (double x : {s.r, s.theta, s.gamma, s.delta, s.tgo, s.a_cmd, s.a_real, s.aT_hat}) {
                line += ',';
                line += format_double(x);
            }
            line += ',';
            line += std::to_string(log.topo[k]);
            line += ',';
            line += format_double(s.x);
            line += ',';
            line += format_double(s.y);
            os << line << '\n';
        }
    }
}

namespace {

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json events_json(const SimLog& log, const json& config_echo) {
    json ev;
    ev["schema"] = log_schema;
    ev["consensus_time"] = opt_number(log.consensus_time);
    json caps = json::array();
    for (const auto& c : log.capture_times) caps.push_back(opt_number(c));
    ev["capture_times"] = caps;
    ev["T_f"] = opt_number(log.T_f);
    ev["capture_spread"] = finite_or_null(log.capture_spread());
    ev["closest_approach"] = log.closest_approach;
    json missed = json::array();
    for (bool m : log.missed) missed.push_back(m);
    ev["missed"] = missed;
    json miss_times = json::array();
    for (const auto& c : log.miss_times) miss_times.push_back(opt_number(c));
    ev["miss_times"] = miss_times;
    ev["t_end"] = log.t_end;

    const DerivedGains& g = log.gains;
    json gains;
    gains["lambda2"] = g.lambda2;
    gains["min_lambda2"] = g.min_lambda2;
    gains["min_edges"] = g.min_edges;
    if (!g.B.empty()) gains["B"] = g.B;
    if (!g.P.empty()) {
        gains["P"] = g.P;
        gains["P_min"] = g.P_min;
    } else {
        gains["fixedtime_bound"] = g.fixedtime_bound;
    }
    if (g.eps_tracks_range || g.eps != 0.0) {
        gains["eps"] = g.eps;
        gains["eps_tracks_range"] = g.eps_tracks_range;
    }
    if (g.mu_tracks_range || g.mu != 0.0) {
        gains["mu"] = g.mu;
        gains["mu_tracks_range"] = g.mu_tracks_range;
    }
    ev["gains"] = gains;
    ev["warnings"] = log.warnings;
    ev["config"] = config_echo;
    return ev;
}

std::vector<fs::path> emit_csv(const SimLog& log, const json& config_echo, const fs::path& dir, bool force,
                               int every) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create '" + dir.string() + "': " + ec.message());

    const std::vector<fs::path> files{dir / "timeseries.csv", dir / "events.json"};
    if (!force)
        for (const auto& f : files)
            if (fs::exists(f)) throw Error(ErrorKind::io, "'" + f.string() + "' exists; pass --force to overwrite");

    auto open = [](const fs::path& p) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot write '" + p.string() + "'");
        return out;
    };
    {
        std::ofstream out = open(files[0]);
        write_timeseries(out, log, every);
        if (!out.flush()) throw Error(ErrorKind::io, "write failed on '" + files[0].string() + "'");
    }
    {
        std::ofstream out = open(files[1]);
        out << events_json(log, config_echo).dump(2) << '\n';
        if (!out.flush()) throw Error(ErrorKind::io, "write failed on '" + files[1].string() + "'");
    }
    return files;
}

}  // namespace salvo::cli
