#include "hno/operator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hno/fft.hpp"
#include "hno/hilbert.hpp"
#include "hno/modes.hpp"
#include "hno/rng.hpp"

namespace hno {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

std::vector<std::size_t> all_axes(std::size_t rank) {
    std::vector<std::size_t> axes(rank);
    for (std::size_t i = 0; i < rank; ++i) axes[i] = i;
    return axes;
}

void fill_uniform(Rng& rng, std::vector<double>& v, double bound) {
    for (double& x : v) x = rng.uniform(-bound, bound);
}

Affine init_affine(Rng& rng, std::size_t in, std::size_t out) {
    Affine a;
    a.in = in;
    a.out = out;
    a.weight.resize(in * out);
    a.bias.assign(out, 0.0);
    fill_uniform(rng, a.weight, 1.0 / std::sqrt(static_cast<double>(in)));
    return a;
}

}  // namespace

const char* to_string(Activation a) {
    switch (a) {
        case Activation::identity: return "identity";
        case Activation::relu: return "relu";
        case Activation::gelu: return "gelu";
    }
    return "?";
}

const char* to_string(LayerKind k) { return k == LayerKind::fno ? "fno" : "hno"; }

Activation activation_from_string(const std::string& s) {
    if (s == "identity") return Activation::identity;
    if (s == "relu") return Activation::relu;
    if (s == "gelu") return Activation::gelu;
    throw std::invalid_argument("unknown activation '" + s + "'");
}

LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "fno") return LayerKind::fno;
    if (s == "hno") return LayerKind::hno;
    throw std::invalid_argument("unknown layer kind '" + s + "'");
}

double activate(Activation a, double x) {
    switch (a) {
        case Activation::identity: return x;
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::gelu: return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
    }
    return x;
}

double activate_grad(Activation a, double x) {
    switch (a) {
        case Activation::identity: return 1.0;
        case Activation::relu: return x > 0.0 ? 1.0 : 0.0;
        case Activation::gelu:
            return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) +
                   x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
    }
    return 1.0;
}

RealField pointwise_affine(const RealField& field, const Affine& map) {
    if (field.channels() != map.in)
        throw std::invalid_argument("pointwise_affine: field has " +
                                    std::to_string(field.channels()) + " channels, map expects " +
                                    std::to_string(map.in));
    if (map.weight.size() != map.in * map.out || map.bias.size() != map.out)
        throw std::invalid_argument("pointwise_affine: malformed map");
    auto shape = field.shape();
    shape.back() = map.out;
    RealField out(shape);
    const std::size_t points = field.size() / map.in;
    // transposed weights turn the per-point product into saxpy over the
    // contiguous output row
    std::vector<double> wt(map.in * map.out);
    for (std::size_t co = 0; co < map.out; ++co)
        for (std::size_t ci = 0; ci < map.in; ++ci)
            wt[ci * map.out + co] = map.weight[co * map.in + ci];
    const double* __restrict bias = map.bias.data();
    for (std::size_t p = 0; p < points; ++p) {
        const double* __restrict in = field.data() + p * map.in;
        double* __restrict o = out.data() + p * map.out;
        for (std::size_t co = 0; co < map.out; ++co) o[co] = bias[co];
        for (std::size_t ci = 0; ci < map.in; ++ci) {
            const double x = in[ci];
            const double* __restrict col = wt.data() + ci * map.out;
            for (std::size_t co = 0; co < map.out; ++co) o[co] += col[co] * x;
        }
    }
    return out;
}

void ModelConfig::validate() const {
    if (layers < 1) throw std::invalid_argument("ModelConfig: layer count must be >= 1");
    if (width == 0 || proj_width == 0 || in_channels == 0 || out_channels == 0)
        throw std::invalid_argument("ModelConfig: zero channel width");
    if (resolution.empty()) throw std::invalid_argument("ModelConfig: empty resolution");
    if (modes.size() != resolution.size())
        throw std::invalid_argument("ModelConfig: modes must list one count per spatial axis");
    for (std::size_t i = 0; i < modes.size(); ++i)
        kept_count(resolution[i], modes[i]);  // throws when out of range
    if (hilbert_axis >= resolution.size())
        throw std::invalid_argument("ModelConfig: hilbert axis out of range");
}

void ModelParams::validate() const {
    config.validate();
    if (lift.in != config.lift_in() || lift.out != config.width)
        throw std::invalid_argument("ModelParams: lift dimensions do not chain");
    if (layers.size() != config.layers)
        throw std::invalid_argument("ModelParams: layer count mismatch");
    for (const LayerParams& l : layers) {
        l.kernel.validate();
        if (l.kernel.in_channels != config.width || l.kernel.out_channels != config.width)
            throw std::invalid_argument("ModelParams: kernel width does not chain");
        if (l.local.in != config.width || l.local.out != config.width)
            throw std::invalid_argument("ModelParams: local map must be width x width");
        if (l.kernel.extents.size() != config.spatial_rank())
            throw std::invalid_argument("ModelParams: kernel rank mismatch");
    }
    if (proj_hidden.in != config.width || proj_hidden.out != config.proj_width ||
        proj_out.in != config.proj_width || proj_out.out != config.out_channels)
        throw std::invalid_argument("ModelParams: projection dimensions do not chain");
}

ModelParams init_model(const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    ModelParams p;
    p.config = cfg;
    p.lift = init_affine(rng, cfg.lift_in(), cfg.width);
    const double s = 1.0 / (static_cast<double>(cfg.width) * static_cast<double>(cfg.width));
    p.layers.resize(cfg.layers);
    for (LayerParams& l : p.layers) {
        l.kernel = make_kernel(cfg.modes, cfg.resolution, cfg.width, cfg.width);
        for (Complex& w : l.kernel.weights) {
            const double re = rng.uniform(-s, s);
            const double im = rng.uniform(-s, s);
            w = {re, im};
        }
        l.local = init_affine(rng, cfg.width, cfg.width);
    }
    p.proj_hidden = init_affine(rng, cfg.width, cfg.proj_width);
    p.proj_out = init_affine(rng, cfg.proj_width, cfg.out_channels);
    p.validate();
    return p;
}

RealField append_coordinate_channels(const RealField& field) {
    const std::size_t rank = field.spatial_rank();
    auto shape = field.shape();
    const std::size_t cin = field.channels();
    shape.back() = cin + rank;
    RealField out(shape);
    const std::size_t points = field.size() / cin;
    const std::vector<std::size_t> sp = field.spatial_shape();
    const std::size_t grid = shape_product(sp);
    for (std::size_t p = 0; p < points; ++p) {
        const double* in = field.data() + p * cin;
        double* o = out.data() + p * (cin + rank);
        for (std::size_t c = 0; c < cin; ++c) o[c] = in[c];
        // decode the spatial multi-index of this point
        std::size_t g = p % grid;
        for (std::size_t a = rank; a-- > 0;) {
            const std::size_t idx = g % sp[a];
            g /= sp[a];
            o[cin + a] = static_cast<double>(idx) / static_cast<double>(sp[a]);
        }
    }
    return out;
}

RealField spectral_branch(const RealField& v, const SpectralKernel& kernel, LayerKind kind,
                          std::size_t hilbert_axis, ComplexSpectrum* kernel_input) {
    const std::vector<std::size_t> axes = all_axes(v.spatial_rank());
    ComplexSpectrum spec = dft_forward(v, axes);
    if (kind == LayerKind::hno) apply_hilbert_multiplier(spec, hilbert_axis);
    ComplexSpectrum truncated = mode_truncate(spec, axes, kernel.modes);
    if (kernel_input) *kernel_input = truncated;
    ComplexSpectrum mixed = channel_contract(truncated, kernel);
    ComplexSpectrum full = mode_pad(mixed, axes, v.spatial_shape());
    RealField w = take_real(dft_inverse(full, axes));
    if (kind == LayerKind::hno) w = inverse_hilbert_transform(w, hilbert_axis);
    return w;
}

RealField spectral_conv(const RealField& v, const SpectralKernel& kernel,
                        const std::vector<std::size_t>& axes) {
    ComplexSpectrum spec = dft_forward(v, axes);
    ComplexSpectrum truncated = mode_truncate(spec, axes, kernel.modes);
    ComplexSpectrum mixed = channel_contract(truncated, kernel);
    std::vector<std::size_t> sizes(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) sizes[i] = v.spatial_extent(axes[i]);
    ComplexSpectrum full = mode_pad(mixed, axes, sizes);
    return take_real(dft_inverse(full, axes));
}

namespace {

RealField layer_apply(const RealField& v, const LayerParams& params, Activation act,
                      LayerKind kind, std::size_t hilbert_axis, LayerTape* tape) {
    RealField pre = pointwise_affine(v, params.local);
    RealField spect =
        spectral_branch(v, params.kernel, kind, hilbert_axis, tape ? &tape->kernel_input : nullptr);
    add_inplace(pre, spect);
    if (tape) {
        tape->input = v;
        tape->preact = pre;
    }
    for (double& x : pre.raw()) x = activate(act, x);
    return pre;
}

}  // namespace

RealField fno_layer(const RealField& v, const LayerParams& params, Activation act) {
    return layer_apply(v, params, act, LayerKind::fno, 0, nullptr);
}

RealField hno_layer(const RealField& v, const LayerParams& params, Activation act,
                    std::size_t hilbert_axis) {
    return layer_apply(v, params, act, LayerKind::hno, hilbert_axis, nullptr);
}

RealField model_forward(const RealField& a, const ModelParams& params, ForwardTape* tape) {
    const ModelConfig& cfg = params.config;
    if (a.spatial_rank() != cfg.spatial_rank())
        throw std::invalid_argument("model_forward: input rank mismatch");
    if (a.channels() != cfg.in_channels)
        throw std::invalid_argument("model_forward: input has " + std::to_string(a.channels()) +
                                    " channels, model expects " +
                                    std::to_string(cfg.in_channels));
    RealField x = cfg.coord_features ? append_coordinate_channels(a) : a;
    if (tape) {
        tape->augmented = x;
        tape->layers.resize(cfg.layers);
    }
    RealField v = pointwise_affine(x, params.lift);
    for (std::size_t l = 0; l < params.layers.size(); ++l)
        v = layer_apply(v, params.layers[l], cfg.activation, cfg.kind, cfg.hilbert_axis,
                        tape ? &tape->layers[l] : nullptr);
    if (tape) tape->final_features = v;
    RealField q = pointwise_affine(v, params.proj_hidden);
    if (tape) tape->proj_pre = q;
    for (double& y : q.raw()) y = activate(cfg.activation, y);
    if (tape) tape->proj_hidden = q;
    RealField pred = pointwise_affine(q, params.proj_out);
    if (tape) tape->prediction = pred;
    return pred;
}

}  // namespace hno
