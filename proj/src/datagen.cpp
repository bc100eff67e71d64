#include "hno/datagen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hno/errors.hpp"
#include "hno/fft.hpp"
#include "hno/rng.hpp"

namespace hno {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(std::size_t v) { return std::to_string(v); }

std::vector<std::size_t> all_axes(std::size_t rank) {
    std::vector<std::size_t> axes(rank);
    for (std::size_t i = 0; i < rank; ++i) axes[i] = i;
    return axes;
}

// Squared physical wavenumber 4*pi^2*|k|^2 of a flat spectral bin index.
double wavenumber_sq(std::size_t flat, const std::vector<std::size_t>& dims) {
    double ksq = 0.0;
    for (std::size_t a = dims.size(); a-- > 0;) {
        const std::size_t n = dims[a];
        const std::size_t j = flat % n;
        flat /= n;
        const double k = (2 * j <= n) ? static_cast<double>(j)
                                      : static_cast<double>(j) - static_cast<double>(n);
        ksq += k * k;
    }
    return 4.0 * kPi * kPi * ksq;
}

std::size_t mirror_index(std::size_t flat, const std::vector<std::size_t>& dims) {
    std::size_t out = 0;
    std::size_t mult = 1;
    for (std::size_t a = dims.size(); a-- > 0;) {
        const std::size_t n = dims[a];
        const std::size_t j = flat % n;
        flat /= n;
        const std::size_t jm = (j == 0) ? 0 : n - j;
        out += jm * mult;
        mult *= n;
    }
    return out;
}

void check_single_sample(const RealField& f, std::size_t rank, const char* who) {
    if (f.spatial_rank() != rank || f.batch() != 1 || f.channels() != 1)
        throw std::invalid_argument(std::string(who) + ": expected a single-sample, " +
                                    std::to_string(rank) + "D, single-channel field");
}

}  // namespace

RealField grf_sample(const GrfSpec& spec) {
    const std::size_t d = spec.shape.size();
    if (d == 0) throw std::invalid_argument("grf_sample: empty shape");
    if (!(spec.tau > 0.0)) throw std::invalid_argument("grf_sample: tau must be positive");
    if (!(spec.alpha > 0.5 * static_cast<double>(d)))
        throw std::invalid_argument("grf_sample: alpha must exceed d/2 for continuous samples");

    std::vector<std::size_t> shape;
    shape.push_back(1);
    for (std::size_t e : spec.shape) shape.push_back(e);
    shape.push_back(1);
    ComplexSpectrum coeff(shape);
    const std::size_t total = coeff.size();

    Rng rng(spec.seed);
    for (std::size_t i = 0; i < total; ++i) coeff[i] = rng.normal_complex();

    constexpr double inv_sqrt2 = 0.7071067811865475244;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t j = mirror_index(i, spec.shape);
        if (j == i) {
            coeff[i] = Complex{std::sqrt(2.0) * coeff[i].real(), 0.0};
        } else if (i < j) {
            const Complex a = coeff[i];
            const Complex b = coeff[j];
            coeff[i] = (a + std::conj(b)) * inv_sqrt2;
            coeff[j] = std::conj(coeff[i]);
        }
    }

    const double exponent = spec.alpha - 0.5 * static_cast<double>(d);
    const double norm = spec.amplitude * static_cast<double>(total) *
                        std::pow(spec.tau, exponent);
    for (std::size_t i = 0; i < total; ++i) {
        const double ksq = wavenumber_sq(i, spec.shape);
        if (ksq == 0.0) {
            coeff[i] = Complex{0.0, 0.0};  // zero-mean samples
        } else {
            coeff[i] *= norm * std::pow(ksq + spec.tau * spec.tau, -0.5 * spec.alpha);
        }
    }
    return take_real(dft_inverse(coeff, all_axes(d)));
}

double grf_variance(const GrfSpec& spec) {
    const std::size_t d = spec.shape.size();
    const std::size_t total = shape_product(spec.shape);
    const double exponent = spec.alpha - 0.5 * static_cast<double>(d);
    const double norm = spec.amplitude * std::pow(spec.tau, exponent);
    double sum = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        const double ksq = wavenumber_sq(i, spec.shape);
        if (ksq == 0.0) continue;
        const double c = norm * std::pow(ksq + spec.tau * spec.tau, -0.5 * spec.alpha);
        sum += c * c;
    }
    return sum;
}

RealField burgers_solve(const RealField& u0, double nu, double t_final, std::size_t n_steps,
                        std::size_t snapshot_stride, std::vector<RealField>* snapshots) {
    check_single_sample(u0, 1, "burgers_solve");
    if (!(nu > 0.0)) throw std::invalid_argument("burgers_solve: viscosity must be positive");
    if (!(t_final > 0.0) || n_steps == 0)
        throw std::invalid_argument("burgers_solve: bad time discretization");
    if (snapshot_stride > 0 && snapshots == nullptr)
        throw std::invalid_argument("burgers_solve: snapshot stride without output vector");

    const std::size_t n = u0.spatial_extent(0);
    const std::vector<std::size_t> axes{0};
    const double dt = t_final / static_cast<double>(n_steps);
    const std::size_t k_cut = n / 3;  // 2/3-rule dealiasing cutoff
    const double k_max = 2.0 * kPi * static_cast<double>(k_cut);
    const double rk4_img = 2.0 * std::sqrt(2.0);  // RK4 imaginary-axis stability bound

    std::vector<double> kappa(n);     // signed physical wavenumber 2*pi*k
    std::vector<bool> keep(n);
    std::vector<double> e_half(n), e_full(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = (2 * j <= n) ? static_cast<double>(j)
                                      : static_cast<double>(j) - static_cast<double>(n);
        kappa[j] = 2.0 * kPi * k;
        keep[j] = std::abs(k) <= static_cast<double>(k_cut);
        const double lambda = -nu * kappa[j] * kappa[j];
        e_half[j] = std::exp(0.5 * lambda * dt);
        e_full[j] = std::exp(lambda * dt);
    }

    // dU/dt = N(U) + L U with N evaluated pseudo-spectrally on the dealiased
    // state; returns N(U) and the max |u| seen in physical space.
    auto nonlinear = [&](const ComplexSpectrum& u_hat, double* max_u) {
        ComplexSpectrum dealiased = u_hat;
        for (std::size_t j = 0; j < n; ++j)
            if (!keep[j]) dealiased[j] = Complex{0.0, 0.0};
        RealField u = take_real(dft_inverse(dealiased, axes));
        if (max_u) *max_u = linf_norm(u);
        for (double& x : u.raw()) x = 0.5 * x * x;
        ComplexSpectrum flux = dft_forward(u, axes);
        for (std::size_t j = 0; j < n; ++j)
            flux[j] = keep[j] ? Complex{0.0, -1.0} * (kappa[j] * flux[j]) : Complex{0.0, 0.0};
        return flux;
    };

    auto scaled_sum = [&](const ComplexSpectrum& a, const std::vector<double>& e,
                          const ComplexSpectrum& b, double s) {
        ComplexSpectrum out = a;
        for (std::size_t j = 0; j < n; ++j) out[j] = e[j] * a[j] + s * b[j];
        return out;
    };

    ComplexSpectrum v = dft_forward(u0, axes);
    for (std::size_t step = 0; step < n_steps; ++step) {
        double max_u = 0.0;
        const ComplexSpectrum k1 = nonlinear(v, &max_u);
        const double dt_limit = rk4_img / (k_max * std::max(max_u, 1e-300));
        if (dt > dt_limit) {
            const std::size_t needed = static_cast<std::size_t>(
                std::ceil(t_final * k_max * max_u / rk4_img));
            throw NumericError("burgers_solve: CFL violated at step " + std::to_string(step) +
                               " (n_steps=" + std::to_string(n_steps) + ", max|u|=" +
                               std::to_string(max_u) + "); need at least " +
                               std::to_string(needed) + " steps");
        }
        // integrating-factor RK4
        ComplexSpectrum a2(v.shape());
        for (std::size_t j = 0; j < n; ++j) a2[j] = e_half[j] * (v[j] + 0.5 * dt * k1[j]);
        const ComplexSpectrum k2 = nonlinear(a2, nullptr);
        const ComplexSpectrum a3 = scaled_sum(v, e_half, k2, 0.5 * dt);
        const ComplexSpectrum k3 = nonlinear(a3, nullptr);
        ComplexSpectrum a4(v.shape());
        for (std::size_t j = 0; j < n; ++j) a4[j] = e_full[j] * v[j] + dt * e_half[j] * k3[j];
        const ComplexSpectrum k4 = nonlinear(a4, nullptr);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = e_full[j] * v[j] +
                   dt / 6.0 *
                       (e_full[j] * k1[j] + 2.0 * e_half[j] * (k2[j] + k3[j]) + k4[j]);
        if (snapshot_stride > 0 && (step + 1) % snapshot_stride == 0)
            snapshots->push_back(take_real(dft_inverse(v, axes)));
    }
    RealField out = take_real(dft_inverse(v, axes));
    if (!out.all_finite()) throw NumericError("burgers_solve: non-finite solution");
    return out;
}

RealField darcy_solve(const RealField& a, const RealField& f) {
    check_single_sample(a, 2, "darcy_solve");
    check_single_sample(f, 2, "darcy_solve");
    if (a.shape() != f.shape())
        throw std::invalid_argument("darcy_solve: coefficient/forcing shape mismatch");
    const std::size_t nx = a.spatial_extent(0);
    const std::size_t ny = a.spatial_extent(1);
    if (nx < 3 || ny < 3) throw std::invalid_argument("darcy_solve: grid too small");
    for (double v : a.raw())
        if (!(v > 0.0))
            throw std::invalid_argument("darcy_solve: coefficient must be strictly positive");

    const double hx = 1.0 / static_cast<double>(nx - 1);
    const double hy = 1.0 / static_cast<double>(ny - 1);
    const double wx = 1.0 / (hx * hx);
    const double wy = 1.0 / (hy * hy);
    const std::size_t mx = nx - 2, my = ny - 2;  // interior extents
    const std::size_t m = mx * my;

    auto coeff = [&](std::size_t i, std::size_t j) { return a[i * ny + j]; };
    auto harm = [](double p, double q) { return 2.0 * p * q / (p + q); };

    // Assemble the 5-point stencil once: diagonal plus the four face weights.
    std::vector<double> diag(m), west(m), east(m), south(m), north(m);
    for (std::size_t i = 1; i <= mx; ++i) {
        for (std::size_t j = 1; j <= my; ++j) {
            const std::size_t r = (i - 1) * my + (j - 1);
            const double aw = harm(coeff(i, j), coeff(i - 1, j)) * wx;
            const double ae = harm(coeff(i, j), coeff(i + 1, j)) * wx;
            const double as = harm(coeff(i, j), coeff(i, j - 1)) * wy;
            const double an = harm(coeff(i, j), coeff(i, j + 1)) * wy;
            diag[r] = aw + ae + as + an;
            west[r] = (i > 1) ? -aw : 0.0;
            east[r] = (i < mx) ? -ae : 0.0;
            south[r] = (j > 1) ? -as : 0.0;
            north[r] = (j < my) ? -an : 0.0;
        }
    }
    auto matvec = [&](const std::vector<double>& u, std::vector<double>& out) {
        for (std::size_t i = 0; i < mx; ++i) {
            for (std::size_t j = 0; j < my; ++j) {
                const std::size_t r = i * my + j;
                double acc = diag[r] * u[r];
                if (i > 0) acc += west[r] * u[r - my];
                if (i + 1 < mx) acc += east[r] * u[r + my];
                if (j > 0) acc += south[r] * u[r - 1];
                if (j + 1 < my) acc += north[r] * u[r + 1];
                out[r] = acc;
            }
        }
    };
    auto dot = [](const std::vector<double>& x, const std::vector<double>& y) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
        return s;
    };

    std::vector<double> rhs(m);
    for (std::size_t i = 1; i <= mx; ++i)
        for (std::size_t j = 1; j <= my; ++j) rhs[(i - 1) * my + (j - 1)] = f[i * ny + j];

    RealField out({1, nx, ny, 1});
    const double bnorm = std::sqrt(dot(rhs, rhs));
    if (bnorm == 0.0) return out;  // f = 0 -> u = 0

    constexpr double rtol = 1e-10;
    const std::size_t max_iter = 10 * nx * ny;
    std::vector<double> x(m, 0.0), r = rhs, p = rhs, ap(m);
    double rs = dot(r, r);
    bool converged = false;
    for (std::size_t it = 0; it < max_iter; ++it) {
        matvec(p, ap);
        const double alpha = rs / dot(p, ap);
        for (std::size_t i = 0; i < m; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < m; ++i) r[i] -= alpha * ap[i];
        const double rs_new = dot(r, r);
        if (std::sqrt(rs_new) <= rtol * bnorm) {
            // recurrence may drift; accept only on the true residual
            matvec(x, ap);
            for (std::size_t i = 0; i < m; ++i) r[i] = rhs[i] - ap[i];
            const double true_rs = dot(r, r);
            if (std::sqrt(true_rs) <= rtol * bnorm) {
                converged = true;
                break;
            }
            rs = true_rs;
            p = r;
            continue;
        }
        const double beta = rs_new / rs;
        rs = rs_new;
        for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
    }
    if (!converged)
        throw NumericError("darcy_solve: conjugate gradient failed to reach relative residual " +
                           std::to_string(rtol) + " within " + std::to_string(max_iter) +
                           " iterations");
    for (std::size_t i = 1; i <= mx; ++i)
        for (std::size_t j = 1; j <= my; ++j) out[i * ny + j] = x[(i - 1) * my + (j - 1)];
    return out;
}

RealField lorenz63_solve(const RealField& forcing, const LorenzParams& params,
                         std::array<double, 3> initial, double dt, RealField* full_state) {
    check_single_sample(forcing, 1, "lorenz63_solve");
    if (!(dt > 0.0)) throw std::invalid_argument("lorenz63_solve: dt must be positive");
    const std::size_t n = forcing.spatial_extent(0);
    RealField out({1, n, 1});
    if (full_state) *full_state = RealField({1, n, 3});

    std::array<double, 3> s = initial;
    auto record = [&](std::size_t i) {
        out[i] = s[0];
        if (full_state)
            for (std::size_t c = 0; c < 3; ++c) (*full_state)[i * 3 + c] = s[c];
    };
    auto deriv = [&params](const std::array<double, 3>& q, double f) {
        return std::array<double, 3>{params.sigma * (q[1] - q[0]),
                                     q[0] * (params.rho - q[2]) - q[1],
                                     q[0] * q[1] - params.beta * q[2] - f};
    };
    auto axpy = [](const std::array<double, 3>& q, double h, const std::array<double, 3>& k) {
        return std::array<double, 3>{q[0] + h * k[0], q[1] + h * k[1], q[2] + h * k[2]};
    };

    record(0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double f0 = forcing[i];
        const double f1 = forcing[i + 1];
        const double fm = 0.5 * (f0 + f1);
        const auto k1 = deriv(s, f0);
        const auto k2 = deriv(axpy(s, 0.5 * dt, k1), fm);
        const auto k3 = deriv(axpy(s, 0.5 * dt, k2), fm);
        const auto k4 = deriv(axpy(s, dt, k3), f1);
        for (std::size_t c = 0; c < 3; ++c)
            s[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2]))
            throw NumericError("lorenz63_solve: diverged at step " + std::to_string(i + 1));
        record(i + 1);
    }
    return out;
}

namespace {

// Generated datasets must be finite with strictly positive truth norms.
void sweep_outputs(const RealField& outputs, const char* who) {
    if (!outputs.all_finite()) throw NumericError(std::string(who) + ": non-finite output field");
    const std::size_t len = outputs.size() / outputs.batch();
    for (std::size_t b = 0; b < outputs.batch(); ++b) {
        double t2 = 0.0;
        const double* t = outputs.data() + b * len;
        for (std::size_t i = 0; i < len; ++i) t2 += t[i] * t[i];
        if (t2 == 0.0)
            throw NumericError(std::string(who) + ": zero-norm output sample " +
                               std::to_string(b));
    }
}

}  // namespace

DatasetPair make_burgers_dataset(const BurgersDatasetConfig& cfg) {
    if (cfg.samples == 0) throw std::invalid_argument("make_burgers_dataset: zero samples");
    DatasetPair pair;
    pair.problem = "burgers1d";
    pair.inputs = RealField({cfg.samples, cfg.resolution, 1});
    pair.outputs = RealField({cfg.samples, cfg.resolution, 1});
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        GrfSpec grf{{cfg.resolution}, cfg.alpha, cfg.tau, cfg.amplitude,
                    Rng::derive(cfg.seed, s)};
        const RealField u0 = grf_sample(grf);
        const RealField u1 = burgers_solve(u0, cfg.nu, cfg.t_final, cfg.steps);
        std::copy(u0.raw().begin(), u0.raw().end(),
                  pair.inputs.raw().begin() + s * cfg.resolution);
        std::copy(u1.raw().begin(), u1.raw().end(),
                  pair.outputs.raw().begin() + s * cfg.resolution);
    }
    pair.metadata = {{"samples", fmt(cfg.samples)},   {"resolution", fmt(cfg.resolution)},
                     {"steps", fmt(cfg.steps)},       {"nu", fmt(cfg.nu)},
                     {"t_final", fmt(cfg.t_final)},   {"alpha", fmt(cfg.alpha)},
                     {"tau", fmt(cfg.tau)},           {"amplitude", fmt(cfg.amplitude)},
                     {"seed", fmt(std::size_t(cfg.seed))}};
    sweep_outputs(pair.outputs, "make_burgers_dataset");
    pair.validate();
    return pair;
}

DatasetPair make_darcy_dataset(const DarcyDatasetConfig& cfg) {
    if (cfg.samples == 0) throw std::invalid_argument("make_darcy_dataset: zero samples");
    const std::size_t n = cfg.resolution;
    DatasetPair pair;
    pair.problem = "darcy2d";
    pair.inputs = RealField({cfg.samples, n, n, 1});
    pair.outputs = RealField({cfg.samples, n, n, 1});
    RealField force({1, n, n, 1});
    for (double& v : force.raw()) v = 1.0;  // coefficient-to-solution operator, f = 1
    const std::size_t len = n * n;
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        GrfSpec grf{{n, n}, cfg.alpha, cfg.tau, cfg.amplitude, Rng::derive(cfg.seed, s)};
        RealField field = grf_sample(grf);
        for (double& v : field.raw()) v = v >= cfg.threshold ? cfg.coeff_high : cfg.coeff_low;
        const RealField u = darcy_solve(field, force);
        std::copy(field.raw().begin(), field.raw().end(), pair.inputs.raw().begin() + s * len);
        std::copy(u.raw().begin(), u.raw().end(), pair.outputs.raw().begin() + s * len);
    }
    pair.metadata = {{"samples", fmt(cfg.samples)},       {"resolution", fmt(n)},
                     {"alpha", fmt(cfg.alpha)},           {"tau", fmt(cfg.tau)},
                     {"amplitude", fmt(cfg.amplitude)},   {"coeff_high", fmt(cfg.coeff_high)},
                     {"coeff_low", fmt(cfg.coeff_low)},   {"threshold", fmt(cfg.threshold)},
                     {"forcing", "1"},                    {"seed", fmt(std::size_t(cfg.seed))}};
    sweep_outputs(pair.outputs, "make_darcy_dataset");
    pair.validate();
    return pair;
}

DatasetPair make_lorenz_dataset(const LorenzDatasetConfig& cfg) {
    if (cfg.samples == 0) throw std::invalid_argument("make_lorenz_dataset: zero samples");
    const std::size_t n = cfg.resolution;
    DatasetPair pair;
    pair.problem = "lorenz63";
    pair.inputs = RealField({cfg.samples, n, 1});
    pair.outputs = RealField({cfg.samples, n, 1});
    for (std::size_t s = 0; s < cfg.samples; ++s) {
        GrfSpec grf{{n}, cfg.forcing_alpha, cfg.forcing_tau, cfg.forcing_amplitude,
                    Rng::derive(cfg.seed, s)};
        const RealField f = grf_sample(grf);
        const RealField x = lorenz63_solve(f, cfg.params, cfg.initial, cfg.dt);
        std::copy(f.raw().begin(), f.raw().end(), pair.inputs.raw().begin() + s * n);
        std::copy(x.raw().begin(), x.raw().end(), pair.outputs.raw().begin() + s * n);
    }
    pair.metadata = {{"samples", fmt(cfg.samples)},
                     {"resolution", fmt(n)},
                     {"dt", fmt(cfg.dt)},
                     {"sigma", fmt(cfg.params.sigma)},
                     {"rho", fmt(cfg.params.rho)},
                     {"beta", fmt(cfg.params.beta)},
                     {"x0", fmt(cfg.initial[0])},
                     {"y0", fmt(cfg.initial[1])},
                     {"z0", fmt(cfg.initial[2])},
                     {"response", "x"},
                     {"forcing_alpha", fmt(cfg.forcing_alpha)},
                     {"forcing_tau", fmt(cfg.forcing_tau)},
                     {"forcing_amplitude", fmt(cfg.forcing_amplitude)},
                     {"seed", fmt(std::size_t(cfg.seed))}};
    sweep_outputs(pair.outputs, "make_lorenz_dataset");
    pair.validate();
    return pair;
}

}  // namespace hno
