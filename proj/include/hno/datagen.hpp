#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hno/dataset.hpp"
#include "hno/field.hpp"

namespace hno {

// Gaussian random field on the periodic unit domain with spectral density
// proportional to (4*pi^2*|k|^2 + tau^2)^(-alpha). Sampled by drawing i.i.d.
// standard complex gaussians per mode, scaling by the square-root density,
// enforcing conjugate symmetry and inverse transforming. The mean mode is
// zeroed, so samples have zero spatial mean. Deterministic per seed.
struct GrfSpec {
    std::vector<std::size_t> shape;  // spatial extents
    double alpha = 2.5;              // smoothness exponent, must exceed d/2
    double tau = 7.0;                // inverse length scale, > 0
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};

RealField grf_sample(const GrfSpec& spec);  // shape (1, spec.shape..., 1)

// Expected pointwise variance of grf_sample, by direct mode summation.
double grf_variance(const GrfSpec& spec);

// Viscous Burgers on the periodic unit interval, u_t + (u^2/2)_x = nu*u_xx.
// Pseudo-spectral with 2/3-rule dealiasing of the quadratic term, exact
// integrating factor for diffusion, classical RK4 in time. The advective
// stage is checked against the RK4 imaginary-axis stability bound each step.
// When snapshot_stride > 0 the state after every snapshot_stride-th step is
// appended to *snapshots (which must then be non-null).
RealField burgers_solve(const RealField& u0, double nu, double t_final, std::size_t n_steps,
                        std::size_t snapshot_stride = 0,
                        std::vector<RealField>* snapshots = nullptr);

// -div(a grad u) = f on the unit square with zero Dirichlet boundary,
// 5-point harmonic-mean finite volumes on the vertex grid, conjugate
// gradient solve to relative residual 1e-10. Returns u on the full
// interior+boundary grid.
RealField darcy_solve(const RealField& a, const RealField& f);

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

// x' = sigma(y-x), y' = x(rho-z) - y, z' = xy - beta*z - f(t), integrated by
// classical RK4 with the forcing linearly interpolated at half steps.
// Returns the x-component on the input grid; the optional full_state output
// receives all three components as channels.
RealField lorenz63_solve(const RealField& forcing, const LorenzParams& params,
                         std::array<double, 3> initial, double dt,
                         RealField* full_state = nullptr);

// Desk-scale dataset builders. Per-sample seeds are derived from the base
// seed and the sample index, so generation order does not matter.
struct BurgersDatasetConfig {
    std::size_t samples = 320;
    std::size_t resolution = 256;
    std::size_t steps = 1024;
    double nu = 0.1;
    double t_final = 1.0;
    double alpha = 2.5;
    double tau = 7.0;
    double amplitude = 2.0;
    std::uint64_t seed = 0;
};
DatasetPair make_burgers_dataset(const BurgersDatasetConfig& cfg);

struct DarcyDatasetConfig {
    std::size_t samples = 320;
    std::size_t resolution = 64;
    double alpha = 2.0;
    double tau = 3.0;
    double amplitude = 1.0;
    double coeff_high = 12.0;  // coefficient value where the field exceeds the threshold
    double coeff_low = 3.0;
    double threshold = 0.0;
    std::uint64_t seed = 0;
};
DatasetPair make_darcy_dataset(const DarcyDatasetConfig& cfg);

struct LorenzDatasetConfig {
    std::size_t samples = 320;
    std::size_t resolution = 2048;
    double dt = 0.01;
    LorenzParams params{10.0, 10.0, 8.0 / 3.0};
    std::array<double, 3> initial{1.0, 1.0, 1.0};
    double forcing_alpha = 2.5;
    double forcing_tau = 5.0;
    double forcing_amplitude = 20.0;
    std::uint64_t seed = 0;
};
DatasetPair make_lorenz_dataset(const LorenzDatasetConfig& cfg);

}  // namespace hno
