#include "hno/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "hno/errors.hpp"
#include "hno/fft.hpp"
#include "hno/hilbert.hpp"
#include "hno/modes.hpp"
#include "hno/rng.hpp"

namespace hno {
namespace {

std::vector<std::size_t> all_axes(std::size_t rank) {
    std::vector<std::size_t> axes(rank);
    for (std::size_t i = 0; i < rank; ++i) axes[i] = i;
    return axes;
}

// g_weight[co,ci] += sum_p g[p,co] * in[p,ci]; g_bias[co] += sum_p g[p,co]
void accumulate_affine_grads(const RealField& input, const RealField& g_out,
                             std::vector<double>& g_weight, std::vector<double>& g_bias) {
    const std::size_t cin = input.channels();
    const std::size_t cout = g_out.channels();
    const std::size_t points = input.size() / cin;
    for (std::size_t p = 0; p < points; ++p) {
        const double* __restrict in = input.data() + p * cin;
        const double* __restrict g = g_out.data() + p * cout;
        for (std::size_t co = 0; co < cout; ++co) {
            const double gc = g[co];
            g_bias[co] += gc;
            double* __restrict row = g_weight.data() + co * cin;
            for (std::size_t ci = 0; ci < cin; ++ci) row[ci] += gc * in[ci];
        }
    }
}

// g_in[p,ci] = sum_co w[co,ci] * g[p,co]
RealField affine_input_grad(const Affine& map, const RealField& g_out) {
    auto shape = g_out.shape();
    shape.back() = map.in;
    RealField g_in(shape);
    const std::size_t points = g_out.size() / map.out;
    const double* __restrict w = map.weight.data();
    for (std::size_t p = 0; p < points; ++p) {
        const double* __restrict g = g_out.data() + p * map.out;
        double* __restrict o = g_in.data() + p * map.in;
        for (std::size_t co = 0; co < map.out; ++co) {
            const double gc = g[co];
            const double* __restrict row = w + co * map.in;
            for (std::size_t ci = 0; ci < map.in; ++ci) o[ci] += row[ci] * gc;
        }
    }
    return g_in;
}

// Adjoint of spectral_branch, mirroring its stages in reverse. kernel_input
// is the truncated spectrum recorded during the forward pass.
RealField spectral_branch_adjoint(const RealField& g_out, const SpectralKernel& kernel,
                                  LayerKind kind, std::size_t hilbert_axis,
                                  const std::vector<std::size_t>& full_sizes,
                                  const ComplexSpectrum& kernel_input,
                                  std::vector<Complex>& g_kernel) {
    const std::vector<std::size_t> axes = all_axes(g_out.spatial_rank());
    RealField g = g_out;
    if (kind == LayerKind::hno) g = hilbert_transform(g, hilbert_axis);  // adjoint of -H
    ComplexSpectrum G = dft_inverse_adjoint(to_complex(g), axes);
    ComplexSpectrum Gk = mode_truncate(G, axes, kernel.modes);  // adjoint of mode_pad
    accumulate_contract_weight_grad(kernel_input, Gk, kernel, g_kernel);
    ComplexSpectrum Gi = channel_contract_adjoint(Gk, kernel);
    ComplexSpectrum Gf = mode_pad(Gi, axes, full_sizes);  // adjoint of mode_truncate
    if (kind == LayerKind::hno) apply_hilbert_multiplier(Gf, hilbert_axis, /*conjugate=*/true);
    return take_real(dft_forward_adjoint(Gf, axes));
}

RealField layer_backward(const RealField& g_out, const LayerTape& tape, const LayerParams& params,
                         Activation act, LayerKind kind, std::size_t hilbert_axis,
                         GradientSet::Layer& g) {
    RealField g_u = g_out;
    for (std::size_t i = 0; i < g_u.size(); ++i) g_u[i] *= activate_grad(act, tape.preact[i]);
    accumulate_affine_grads(tape.input, g_u, g.weight, g.bias);
    RealField g_v = affine_input_grad(params.local, g_u);
    RealField g_s = spectral_branch_adjoint(g_u, params.kernel, kind, hilbert_axis,
                                            tape.input.spatial_shape(), tape.kernel_input,
                                            g.kernel);
    add_inplace(g_v, g_s);
    return g_v;
}

std::pair<double, RealField> relative_l2_value_grad(const RealField& pred,
                                                    const RealField& truth, bool want_grad) {
    if (pred.shape() != truth.shape())
        throw std::invalid_argument("relative_l2: shape mismatch");
    const std::size_t batch = pred.batch();
    const std::size_t len = pred.size() / batch;
    RealField grad = want_grad ? zeros_like(pred) : RealField({1, 1});
    double loss = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        const double* p = pred.data() + b * len;
        const double* t = truth.data() + b * len;
        double e2 = 0.0, t2 = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            const double d = p[i] - t[i];
            e2 += d * d;
            t2 += t[i] * t[i];
        }
        if (t2 == 0.0)
            throw NumericError("relative_l2: degenerate sample " + std::to_string(b) +
                               " has zero-norm truth");
        const double en = std::sqrt(e2);
        const double tn = std::sqrt(t2);
        loss += en / tn;
        if (want_grad && en > 0.0) {
            const double scale = 1.0 / (static_cast<double>(batch) * tn * en);
            double* g = grad.data() + b * len;
            for (std::size_t i = 0; i < len; ++i) g[i] = (p[i] - t[i]) * scale;
        }
    }
    return {loss / static_cast<double>(batch), std::move(grad)};
}

const char* first_non_finite_stage(const ForwardTape& tape) {
    if (!tape.augmented.all_finite()) return "model input";
    for (std::size_t l = 0; l < tape.layers.size(); ++l) {
        if (!tape.layers[l].input.all_finite()) return "layer input";
        if (!tape.layers[l].kernel_input.all_finite()) return "layer spectrum";
        if (!tape.layers[l].preact.all_finite()) return "layer preactivation";
    }
    if (!tape.final_features.all_finite()) return "final features";
    if (!tape.proj_pre.all_finite()) return "projection preactivation";
    if (!tape.prediction.all_finite()) return "prediction";
    return "loss";
}

}  // namespace

GradientSet GradientSet::zeros_like(const ModelParams& params) {
    GradientSet g;
    g.lift_weight.assign(params.lift.weight.size(), 0.0);
    g.lift_bias.assign(params.lift.bias.size(), 0.0);
    g.layers.resize(params.layers.size());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        g.layers[l].kernel.assign(params.layers[l].kernel.weights.size(), Complex{0.0, 0.0});
        g.layers[l].weight.assign(params.layers[l].local.weight.size(), 0.0);
        g.layers[l].bias.assign(params.layers[l].local.bias.size(), 0.0);
    }
    g.proj_hidden_weight.assign(params.proj_hidden.weight.size(), 0.0);
    g.proj_hidden_bias.assign(params.proj_hidden.bias.size(), 0.0);
    g.proj_out_weight.assign(params.proj_out.weight.size(), 0.0);
    g.proj_out_bias.assign(params.proj_out.bias.size(), 0.0);
    return g;
}

bool GradientSet::all_finite() const {
    auto ok = [](const std::vector<double>& v) {
        for (double x : v)
            if (!std::isfinite(x)) return false;
        return true;
    };
    auto okc = [](const std::vector<Complex>& v) {
        for (const Complex& z : v)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    };
    if (!ok(lift_weight) || !ok(lift_bias)) return false;
    for (const Layer& l : layers)
        if (!okc(l.kernel) || !ok(l.weight) || !ok(l.bias)) return false;
    return ok(proj_hidden_weight) && ok(proj_hidden_bias) && ok(proj_out_weight) &&
           ok(proj_out_bias);
}

std::vector<double*> parameter_scalars(ModelParams& params) {
    std::vector<double*> out;
    auto push = [&out](std::vector<double>& v) {
        for (double& x : v) out.push_back(&x);
    };
    auto push_c = [&out](std::vector<Complex>& v) {
        for (Complex& z : v) {
            double* comps = reinterpret_cast<double*>(&z);
            out.push_back(comps);
            out.push_back(comps + 1);
        }
    };
    push(params.lift.weight);
    push(params.lift.bias);
    for (LayerParams& l : params.layers) {
        push_c(l.kernel.weights);
        push(l.local.weight);
        push(l.local.bias);
    }
    push(params.proj_hidden.weight);
    push(params.proj_hidden.bias);
    push(params.proj_out.weight);
    push(params.proj_out.bias);
    return out;
}

std::vector<const double*> gradient_scalars(const GradientSet& grads) {
    std::vector<const double*> out;
    auto push = [&out](const std::vector<double>& v) {
        for (const double& x : v) out.push_back(&x);
    };
    auto push_c = [&out](const std::vector<Complex>& v) {
        for (const Complex& z : v) {
            const double* comps = reinterpret_cast<const double*>(&z);
            out.push_back(comps);
            out.push_back(comps + 1);
        }
    };
    push(grads.lift_weight);
    push(grads.lift_bias);
    for (const GradientSet::Layer& l : grads.layers) {
        push_c(l.kernel);
        push(l.weight);
        push(l.bias);
    }
    push(grads.proj_hidden_weight);
    push(grads.proj_hidden_bias);
    push(grads.proj_out_weight);
    push(grads.proj_out_bias);
    return out;
}

double relative_l2(const RealField& pred, const RealField& truth) {
    return relative_l2_value_grad(pred, truth, /*want_grad=*/false).first;
}

BackwardResult backward(const ModelParams& params, const RealField& inputs,
                        const RealField& targets) {
    if (inputs.batch() == 0) throw std::invalid_argument("backward: empty batch");
    ForwardTape tape;
    const RealField pred = model_forward(inputs, params, &tape);
    double loss;
    RealField g_pred({1, 1});
    try {
        auto lv = relative_l2_value_grad(pred, targets, /*want_grad=*/true);
        loss = lv.first;
        g_pred = std::move(lv.second);
    } catch (const NumericError&) {
        throw;
    }
    if (!std::isfinite(loss))
        throw NumericError(std::string("backward: non-finite loss; first non-finite "
                                       "intermediate: ") +
                           first_non_finite_stage(tape));

    BackwardResult result;
    result.loss = loss;
    result.grads = GradientSet::zeros_like(params);
    GradientSet& g = result.grads;
    const ModelConfig& cfg = params.config;

    accumulate_affine_grads(tape.proj_hidden, g_pred, g.proj_out_weight, g.proj_out_bias);
    RealField g_hidden = affine_input_grad(params.proj_out, g_pred);
    for (std::size_t i = 0; i < g_hidden.size(); ++i)
        g_hidden[i] *= activate_grad(cfg.activation, tape.proj_pre[i]);
    accumulate_affine_grads(tape.final_features, g_hidden, g.proj_hidden_weight,
                            g.proj_hidden_bias);
    RealField g_v = affine_input_grad(params.proj_hidden, g_hidden);
    for (std::size_t l = params.layers.size(); l-- > 0;)
        g_v = layer_backward(g_v, tape.layers[l], params.layers[l], cfg.activation, cfg.kind,
                             cfg.hilbert_axis, g.layers[l]);
    accumulate_affine_grads(tape.augmented, g_v, g.lift_weight, g.lift_bias);
    return result;
}

GradCheckReport gradient_check(const ModelParams& params, const RealField& inputs,
                               const RealField& targets, const GradCheckOptions& opt) {
    auto run_backward = opt.backward_fn
                            ? opt.backward_fn
                            : [](const ModelParams& p, const RealField& x, const RealField& y) {
                                  return backward(p, x, y);
                              };
    ModelParams work = params;
    const BackwardResult analytic = run_backward(work, inputs, targets);
    const std::vector<double*> slots = parameter_scalars(work);
    const std::vector<const double*> gslots = gradient_scalars(analytic.grads);
    if (slots.size() != gslots.size())
        throw std::invalid_argument("gradient_check: parameter/gradient shape mismatch");

    std::vector<std::size_t> coords(slots.size());
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (opt.coordinates < coords.size()) {
        Rng rng(opt.seed);
        // partial Fisher-Yates: the first opt.coordinates entries become a
        // uniform subsample without replacement
        for (std::size_t i = 0; i < opt.coordinates; ++i)
            std::swap(coords[i], coords[i + rng.below(coords.size() - i)]);
        coords.resize(opt.coordinates);
    }

    // Deviations are measured against the larger of the two values, floored
    // at the problem's own scales (a fraction of the largest analytic
    // gradient, and of the loss per unit parameter). Coordinates whose
    // gradients sit below those floors are compared at that scale instead of
    // amplifying finite-difference roundoff.
    double g_max = 0.0;
    for (const double* g : gslots) g_max = std::max(g_max, std::abs(*g));
    const double floor =
        std::max({1e-3 * g_max, 2e-4 * std::max(1.0, std::abs(analytic.loss)), 1e-12});

    GradCheckReport rep;
    rep.tolerance = opt.tolerance;
    double sum_rel = 0.0;
    for (std::size_t idx : coords) {
        double* slot = slots[idx];
        const double saved = *slot;
        *slot = saved + opt.step;
        const double lp = relative_l2(model_forward(inputs, work), targets);
        *slot = saved - opt.step;
        const double lm = relative_l2(model_forward(inputs, work), targets);
        *slot = saved;
        const double fd = (lp - lm) / (2.0 * opt.step);
        const double an = *gslots[idx];
        const double denom = std::max({std::abs(fd), std::abs(an), floor});
        const double rel = std::abs(fd - an) / denom;
        rep.max_rel = std::max(rep.max_rel, rel);
        sum_rel += rel;
    }
    rep.checked = coords.size();
    rep.mean_rel = coords.empty() ? 0.0 : sum_rel / static_cast<double>(coords.size());
    rep.pass = rep.max_rel < opt.tolerance;
    return rep;
}

void adam_step(ModelParams& params, const GradientSet& grads, AdamState& state,
               const AdamConfig& cfg) {
    const std::vector<double*> ps = parameter_scalars(params);
    const std::vector<const double*> gs = gradient_scalars(grads);
    if (ps.size() != gs.size())
        throw std::invalid_argument("adam_step: parameter/gradient shape mismatch");
    if (state.m.empty()) {
        state.m.assign(ps.size(), 0.0);
        state.v.assign(ps.size(), 0.0);
    }
    if (state.m.size() != ps.size() || state.v.size() != ps.size())
        throw std::invalid_argument("adam_step: moment arrays not congruent with parameters");
    for (const double* g : gs)
        if (!std::isfinite(*g)) throw NumericError("adam_step: non-finite gradient");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double grad = *gs[i] + cfg.weight_decay * *ps[i];
        double& m = state.m[i];
        double& v = state.v[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad * grad;
        const double mhat = m / bc1;
        const double vhat = v / bc2;
        *ps[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
    }
}

void TrainConfig::validate() const {
    if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw std::invalid_argument("TrainConfig: validation fraction must be in (0, 1)");
}

std::vector<double> per_sample_relative_l2(const ModelParams& params, const RealField& inputs,
                                           const RealField& targets, std::size_t batch_size) {
    if (inputs.batch() != targets.batch())
        throw std::invalid_argument("per_sample_relative_l2: sample count mismatch");
    const std::size_t n = inputs.batch();
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t start = 0; start < n; start += batch_size) {
        const std::size_t stop = std::min(n, start + batch_size);
        std::vector<std::size_t> rows(stop - start);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = start + i;
        const RealField bx = gather_samples(inputs, rows);
        const RealField by = gather_samples(targets, rows);
        const RealField pred = model_forward(bx, params);
        const std::size_t len = by.size() / by.batch();
        for (std::size_t b = 0; b < by.batch(); ++b) {
            const double* p = pred.data() + b * len;
            const double* t = by.data() + b * len;
            double e2 = 0.0, t2 = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
                const double d = p[i] - t[i];
                e2 += d * d;
                t2 += t[i] * t[i];
            }
            if (t2 == 0.0)
                throw NumericError("per_sample_relative_l2: zero-norm truth sample " +
                                   std::to_string(start + b));
            out.push_back(std::sqrt(e2) / std::sqrt(t2));
        }
    }
    return out;
}

TrainResult train(const DatasetPair& data, const TrainConfig& cfg) {
    cfg.validate();
    data.validate();
    const std::size_t n = data.samples();
    std::size_t n_val = static_cast<std::size_t>(
        std::llround(cfg.validation_fraction * static_cast<double>(n)));
    n_val = std::max<std::size_t>(1, std::min(n_val, n - 1));
    const std::size_t n_train = n - n_val;
    if (n_train < 1 || n_val < 1)
        throw std::invalid_argument("train: dataset must have at least 2 samples post-split");

    Rng split_rng(Rng::derive(cfg.seed, 0));
    const std::vector<std::size_t> perm = split_rng.permutation(n);
    const std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + n_train);
    const std::vector<std::size_t> val_idx(perm.begin() + n_train, perm.end());
    const RealField val_in = gather_samples(data.inputs, val_idx);
    const RealField val_out = gather_samples(data.outputs, val_idx);

    ModelConfig mc = cfg.model;
    mc.in_channels = data.inputs.channels();
    mc.out_channels = data.outputs.channels();
    mc.resolution = data.inputs.spatial_shape();
    ModelParams model = init_model(mc, Rng::derive(cfg.seed, 1));

    TrainResult result;
    result.report.seed = cfg.seed;
    result.report.config = cfg;
    result.report.config.model = mc;
    result.best = model;
    double best_val = std::numeric_limits<double>::infinity();

    AdamState state;
    TrainReport& rep = result.report;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng shuffle_rng(Rng::derive(cfg.seed, 100 + epoch));
        const std::vector<std::size_t> order = shuffle_rng.permutation(n_train);
        double loss_weighted = 0.0;
        std::size_t seen = 0;
        bool diverged = false;
        for (std::size_t start = 0; start < n_train; start += cfg.batch_size) {
            const std::size_t stop = std::min(n_train, start + cfg.batch_size);
            std::vector<std::size_t> rows(stop - start);
            for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = train_idx[order[start + i]];
            const RealField bx = gather_samples(data.inputs, rows);
            const RealField by = gather_samples(data.outputs, rows);
            double loss;
            try {
                BackwardResult back = backward(model, bx, by);
                loss = back.loss;
                if (!std::isfinite(loss) || loss > 1e6) {
                    diverged = true;
                    break;
                }
                adam_step(model, back.grads, state, cfg.adam);
            } catch (const NumericError&) {
                diverged = true;
                break;
            }
            loss_weighted += loss * static_cast<double>(rows.size());
            seen += rows.size();
        }
        if (diverged) {
            rep.diverged = true;
            rep.diverged_epoch = epoch + 1;
            break;
        }
        const std::vector<double> vals =
            per_sample_relative_l2(model, val_in, val_out, cfg.batch_size);
        double vsum = 0.0;
        for (double v : vals) vsum += v;
        const double val = vsum / static_cast<double>(vals.size());
        const auto t1 = std::chrono::steady_clock::now();
        rep.train_loss.push_back(loss_weighted / static_cast<double>(seen));
        rep.val_rel_l2.push_back(val);
        rep.seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        if (val < best_val) {
            best_val = val;
            result.best = model;
        }
    }
    if (!rep.val_rel_l2.empty()) rep.final_val = rep.val_rel_l2.back();
    result.final = std::move(model);
    return result;
}

void write_report_csv(const TrainReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "epoch,train_loss,val_rel_l2,seconds\n";
    char buf[96];
    for (std::size_t e = 0; e < report.train_loss.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", e + 1, report.train_loss[e],
                      report.val_rel_l2[e], report.seconds[e]);
        out << buf;
    }
    out.flush();
    if (!out.good()) throw FormatError(path + ": write failure");
}

}  // namespace hno
