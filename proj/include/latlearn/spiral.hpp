#pragma once

#include "latlearn/geometry.hpp"
#include "latlearn/lattice.hpp"

#include <array>
#include <optional>
#include <vector>

namespace latlearn {

/// kappa(s) = a + b s + c s^2 + d s^3 on [0, sf], starting at the origin
/// with heading zero.
struct CubicSpiral {
    std::array<double, 4> coeffs{};
    double sf = 0.0;

    double curvature(double s) const;
    double heading(double s) const;
    /// Max |kappa| over [0, sf] (endpoints and interior critical points).
    double max_abs_curvature() const;
    /// Pose at arc length s by Simpson integration with `nodes` samples.
    Pose2D pose_at(double s, int nodes = 129) const;
};

enum class SpiralFailure { None, NoConvergence, CurvatureExceeded };

struct SpiralSolution {
    std::optional<CubicSpiral> spiral;
    SpiralFailure failure = SpiralFailure::None;
    int iterations = 0;

    bool ok() const { return spiral.has_value(); }
};

struct SpiralSolverOptions {
    int max_iterations = 50;
    double tolerance = 1e-6;
    int simpson_nodes = 129;
};

/// Shooting solve for a spiral from (0,0,0) to `target` with zero curvature
/// at both ends: unknowns (b, c, sf), a = 0, d fixed by kappa(sf) = 0.
SpiralSolution solve_spiral_bvp(const Pose2D& target, double kappa_max, const SpiralSolverOptions& opts = {});

/// Positions sampled at the SampledPath stations of the spiral.
SampledPath sample_spiral(const CubicSpiral& sp, double delta);

struct DenseSetConfig {
    double x_min = 0.4;
    double x_max = 4.0;
    double y_min = -2.0;
    double y_max = 2.0;
    /// Local end headings; reflections (negations) are added automatically.
    std::vector<double> theta_endpoints;
    LatticeConfig lattice = LatticeConfig::standard();
    double kappa_max = 0.5;
    double delta = 0.1;

    static DenseSetConfig standard();
    void validate() const;
};

ControlSet generate_dense_control_set(const DenseSetConfig& cfg);

}  // namespace latlearn
