#pragma once
#include <string>
#include <vector>

#include "lognls/evolve.hpp"
#include "lognls/grid.hpp"
#include "lognls/ground_state.hpp"
#include "lognls/stability.hpp"

namespace lognls {

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);

// Field snapshot, bit-exact: magic "LOGNLS01", little-endian u32 dim, u32 M,
// f64 L, f64 t, then M^dim complex values as interleaved f64 (re, im),
// row-major.
void write_snapshot(const std::string& path, const Field& f, double t);
Field read_snapshot(const std::string& path, double* t_out);

std::string ground_state_json(const GroundStateResult& r, const Grid& g);
std::string stability_json(const StabilityReport& r, const Grid& g);
std::string trajectory_json(const TrajectoryDiagnostics& d, const Grid& g);

// Self-contained gnuplot scripts referencing a CSV by relative name.
std::string drift_plot_script(const std::string& csv_name);
std::string distance_plot_script(const std::string& csv_name);

std::string format_double(double v);  // %.17g, the format used in every file

}  // namespace lognls
