#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "salvo/error.hpp"
#include "salvo/simulator.hpp"
#include "salvo_cli/output.hpp"
#include "salvo_cli/scenario_io.hpp"

namespace {

using namespace salvo;

enum Exit { ok = 0, usage = 1, validation = 2, divergence = 3, io = 4 };

int report(const Error& e, Exit code) {
    std::cerr << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return code;
}

Exit load_exit(const Error& e) { return e.kind() == ErrorKind::io ? io : validation; }

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void print_gains(const DerivedGains& g) {
    std::printf("lambda2            %.4f  (%.17g)\n", g.lambda2, g.lambda2);
    std::printf("min_edges          %d\n", g.min_edges);
    std::printf("min_lambda2        %.4f  (%.17g)\n", g.min_lambda2, g.min_lambda2);
    for (std::size_t i = 0; i < g.B.size(); ++i) std::printf("B[%zu]               %.17g\n", i + 1, g.B[i]);
    if (!g.B.empty()) std::printf("settling bound     %.6g s\n", g.fixedtime_bound);
    for (std::size_t i = 0; i < g.P.size(); ++i) std::printf("P[%zu]               %.17g\n", i + 1, g.P[i]);
    if (!g.P.empty()) std::printf("P_min              %.17g\n", g.P_min);
    if (g.eps != 0.0 || g.eps_tracks_range)
        std::printf("eps                %.6g%s\n", g.eps, g.eps_tracks_range ? "  (at t = 0, tracks range)" : "");
    if (g.mu != 0.0 || g.mu_tracks_range)
        std::printf("mu                 %.6g%s\n", g.mu, g.mu_tracks_range ? "  (at t = 0, tracks range)" : "");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"salvo: cooperative salvo guidance simulator"};
    app.require_subcommand(1);

    std::string scenario, out_dir;
    cli::Overrides ov;
    bool force = false;
    int every = 1;

    auto* run = app.add_subcommand("run", "run a scenario and write timeseries.csv and events.json");
    run->add_option("--scenario", scenario, "scenario file or bundled preset name")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--dt", ov.dt, "integration step, s");
    run->add_option("--seed", ov.seed, "seed for random switching");
    run->add_option("--law", ov.law, "guidance law name");
    run->add_option("--ts", ov.ts, "prescribed consensus time, s");
    run->add_option("--every", every, "keep every n-th logged sample in the CSV")->check(CLI::PositiveNumber);
    run->add_flag("--force", force, "overwrite existing output files");

    auto* val = app.add_subcommand("validate", "check a scenario without running it");
    val->add_option("--scenario", scenario, "scenario file or bundled preset name")->required();

    auto* pre = app.add_subcommand("presets", "list bundled scenarios");
    std::string show_name;
    pre->add_option("--show", show_name, "print the named preset");

    auto* spec = app.add_subcommand("spectral", "print graph spectra and derived gains");
    spec->add_option("--scenario", scenario, "scenario file or bundled preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? ok : usage;
    }

    if (*pre) {
        if (!show_name.empty()) {
            for (const auto& p : cli::presets())
                if (p.name == show_name) {
                    std::cout << p.text;
                    return ok;
                }
            std::cerr << "error[io]: no preset named '" << show_name << "'\n";
            return io;
        }
        for (const auto& p : cli::presets()) {
            std::string desc;
            try {
                desc = cli::parse_document(p.text, std::string(p.name)).value("description", "");
            } catch (const Error&) {
            }
            std::cout << p.name << "  " << desc << '\n';
        }
        return ok;
    }

    cli::LoadedScenario loaded;
    try {
        loaded = cli::load_scenario(scenario, *run ? ov : cli::Overrides{});
    } catch (const Error& e) {
        return report(e, load_exit(e));
    }

    if (*val) {
        try {
            const DerivedGains g = derive_gains(loaded.scenario);
            print_warnings(g.warnings);
        } catch (const Error& e) {
            return report(e, validation);
        }
        std::cout << "ok: " << loaded.scenario.name << '\n';
        return ok;
    }

    if (*spec) {
        try {
            print_gains(derive_gains(loaded.scenario));
        } catch (const Error& e) {
            return report(e, validation);
        }
        return ok;
    }

    SimLog log;
    try {
        log = salvo::run(loaded.scenario);
    } catch (const Error& e) {
        return report(e, e.kind() == ErrorKind::non_finite ? divergence : validation);
    }
    print_warnings(log.warnings);
    try {
        cli::emit_csv(log, loaded.doc, out_dir, force, every);
    } catch (const Error& e) {
        return report(e, io);
    }

    std::printf("scenario        %s\n", loaded.scenario.name.c_str());
    if (log.consensus_time)
        std::printf("consensus_time  %.4f s\n", *log.consensus_time);
    else
        std::printf("consensus_time  none\n");
    for (std::size_t i = 0; i < log.capture_times.size(); ++i) {
        if (log.capture_times[i])
            std::printf("capture[%zu]      %.4f s\n", i + 1, *log.capture_times[i]);
        else
            std::printf("capture[%zu]      none (closest %.3f m)\n", i + 1, log.closest_approach[i]);
    }
    if (log.T_f) std::printf("T_f             %.4f s  (spread %.4f s)\n", *log.T_f, log.capture_spread());
    return ok;
}
