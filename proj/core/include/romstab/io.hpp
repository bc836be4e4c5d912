#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "romstab/integrate.hpp"
#include "romstab/mes.hpp"
#include "romstab/pod.hpp"
#include "romstab/rom.hpp"
#include "romstab/truth.hpp"

namespace romstab::io {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);
double parse_double(std::string_view text);

/// Snapshot CSV: header `t,x_0,...,x_{n-1}`, one row per snapshot, plus a JSON
/// sidecar {n, s, h, weights: "uniform", blocks: [...]}. Weights are the
/// uniform quadrature value h per point.
void write_snapshots(const std::filesystem::path& csv_path,
                     const std::filesystem::path& sidecar_path,
                     const truth::SnapshotSet& snapshots);
truth::SnapshotSet read_snapshots(const std::filesystem::path& csv_path,
                                  const std::filesystem::path& sidecar_path);

/// Coefficient/state trajectory CSV: header `t,<prefix>_0,...`.
void write_trajectory(const std::filesystem::path& csv_path, const Trajectory& traj,
                      std::string_view prefix);
Trajectory read_trajectory(const std::filesystem::path& csv_path);

/// Basis CSV (`mode_0..mode_{r-1}` columns, one row per grid point), base
/// state CSV, and JSON sidecar {r, r_v, r_T, lambdas, subtract_mean,
/// base_state_file, ...}.
void write_basis(const std::filesystem::path& csv_path,
                 const std::filesystem::path& sidecar_path,
                 const std::filesystem::path& base_state_path, const pod::PodBasis& basis);
pod::PodBasis read_basis(const std::filesystem::path& csv_path,
                         const std::filesystem::path& sidecar_path);

/// ROM JSON: {r, mu, e, L, D, C} with row-major nested arrays.
void write_rom(const std::filesystem::path& json_path, const rom::QuadraticRom& rom);
rom::QuadraticRom read_rom(const std::filesystem::path& json_path);

/// Tuner trace CSV: `k,mu_e_hat,mu_nl_hat,Q,stable`.
void write_cost_trace(const std::filesystem::path& csv_path, const mes::CostTrace& trace);
mes::CostTrace read_cost_trace(const std::filesystem::path& csv_path);

/// Tuner config JSON: {a, omega, dt, scale, k_max, q_penalty}.
void write_mes_config(const std::filesystem::path& json_path, const mes::MesConfig& cfg);
mes::MesConfig read_mes_config(const std::filesystem::path& json_path);

}  // namespace romstab::io
