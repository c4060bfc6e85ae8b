#ifndef SQGFRONT_IO_HPP
#define SQGFRONT_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sqgfront/evolution.hpp"
#include "sqgfront/front_operator.hpp"

namespace sqg {

inline constexpr const char* kVersion = "0.1.0";

// Stable 64-bit content hash used to stamp reports.
std::string fnv1a_hex(std::string_view data);

// Binary column file (little-endian doubles) plus a JSON sidecar {L, N, time}.
void write_field(const Field& f, double time, const std::filesystem::path& base);
Field read_field(const std::filesystem::path& base, double* time = nullptr);

void write_field_csv(const Field& f, const std::filesystem::path& path);
void write_quadrature_csv(const QuadratureScheme& q,
                          const std::filesystem::path& path);

// Directory layout: manifest.json, snapshot_%06d.{f64,json}, monitors.csv.
void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                      const nlohmann::json& meta);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace sqg

#endif
