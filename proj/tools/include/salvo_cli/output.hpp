#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "salvo/simulator.hpp"

namespace salvo::cli {

inline constexpr const char* csv_header = "t,agent,r,theta,gamma,delta,tgo,a_cmd,a_real,aT_hat,topo,x,y";
inline constexpr const char* log_schema = "salvo-log/1";

// Shortest text that parses back to the same double; never locale dependent.
std::string format_double(double x);

// One row per agent per kept sample; agents are one-based. every >= 1 keeps
// every every-th logged sample.
void write_timeseries(std::ostream& os, const SimLog& log, int every = 1);

nlohmann::json events_json(const SimLog& log, const nlohmann::json& config_echo);

// Writes timeseries.csv and events.json into dir, creating it if needed.
// Refuses to replace existing files unless force. Throws Error(io).
std::vector<std::filesystem::path> emit_csv(const SimLog& log, const nlohmann::json& config_echo,
                                            const std::filesystem::path& dir, bool force, int every = 1);

}  // namespace salvo::cli
