#include <cstdint>

#include "hno/binio.hpp"
#include "hno/operator.hpp"

namespace hno {
namespace {

constexpr std::uint32_t kVersion = 1;

void write_array(detail::ByteWriter& w, const std::vector<double>& v) {
    for (double x : v) w.f64(x);
}

void write_array(detail::ByteWriter& w, const std::vector<Complex>& v) {
    for (const Complex& z : v) {
        w.f64(z.real());
        w.f64(z.imag());
    }
}

void read_array(detail::ByteReader& r, std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = r.f64();
}

void read_array(detail::ByteReader& r, std::vector<Complex>& v, std::size_t n) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = r.f64();
        const double im = r.f64();
        v[i] = {re, im};
    }
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const std::string& problem_tag) {
    params.validate();
    const ModelConfig& c = params.config;
    detail::ByteWriter w;
    w.bytes("HNOM", 4);
    w.u32(kVersion);
    w.u32(c.kind == LayerKind::fno ? 0u : 1u);
    w.u32(static_cast<std::uint32_t>(c.layers));
    w.u32(static_cast<std::uint32_t>(c.width));
    w.u32(static_cast<std::uint32_t>(c.spatial_rank()));
    for (std::size_t m : c.modes) w.u32(static_cast<std::uint32_t>(m));
    for (std::size_t n : c.resolution) w.u32(static_cast<std::uint32_t>(n));
    w.u32(static_cast<std::uint32_t>(c.activation));
    w.u32(static_cast<std::uint32_t>(c.hilbert_axis));
    w.u32(c.coord_features ? 1u : 0u);
    w.u32(static_cast<std::uint32_t>(c.in_channels));
    w.u32(static_cast<std::uint32_t>(c.out_channels));
    w.u32(static_cast<std::uint32_t>(c.proj_width));
    w.str(problem_tag);
    write_array(w, params.lift.weight);
    write_array(w, params.lift.bias);
    for (const LayerParams& l : params.layers) {
        write_array(w, l.kernel.weights);
        write_array(w, l.local.weight);
        write_array(w, l.local.bias);
    }
    write_array(w, params.proj_hidden.weight);
    write_array(w, params.proj_hidden.bias);
    write_array(w, params.proj_out.weight);
    write_array(w, params.proj_out.bias);
    detail::write_file_bytes(path, w.data());
}

Checkpoint load_checkpoint(const std::string& path) {
    detail::ByteReader r(detail::read_file_bytes(path), path);
    r.expect_magic("HNOM");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
    ModelConfig c;
    const std::uint32_t kind = r.u32();
    if (kind > 1) throw FormatError(path + ": bad layer kind tag");
    c.kind = kind == 0 ? LayerKind::fno : LayerKind::hno;
    c.layers = r.u32();
    c.width = r.u32();
    const std::uint32_t rank = r.u32();
    if (rank == 0 || rank > 8) throw FormatError(path + ": implausible spatial rank");
    c.modes.resize(rank);
    for (auto& m : c.modes) m = r.u32();
    c.resolution.resize(rank);
    for (auto& n : c.resolution) n = r.u32();
    const std::uint32_t act = r.u32();
    if (act > 2) throw FormatError(path + ": bad activation tag");
    c.activation = static_cast<Activation>(act);
    c.hilbert_axis = r.u32();
    c.coord_features = r.u32() != 0;
    c.in_channels = r.u32();
    c.out_channels = r.u32();
    c.proj_width = r.u32();

    Checkpoint ckpt;
    ckpt.problem_tag = r.str();
    ModelParams& p = ckpt.params;
    p.config = c;
    p.config.validate();

    p.lift.in = c.lift_in();
    p.lift.out = c.width;
    read_array(r, p.lift.weight, p.lift.in * p.lift.out);
    read_array(r, p.lift.bias, p.lift.out);
    p.layers.resize(c.layers);
    for (LayerParams& l : p.layers) {
        l.kernel = make_kernel(c.modes, c.resolution, c.width, c.width);
        read_array(r, l.kernel.weights, l.kernel.weights.size());
        l.local.in = c.width;
        l.local.out = c.width;
        read_array(r, l.local.weight, c.width * c.width);
        read_array(r, l.local.bias, c.width);
    }
    p.proj_hidden.in = c.width;
    p.proj_hidden.out = c.proj_width;
    read_array(r, p.proj_hidden.weight, c.width * c.proj_width);
    read_array(r, p.proj_hidden.bias, c.proj_width);
    p.proj_out.in = c.proj_width;
    p.proj_out.out = c.out_channels;
    read_array(r, p.proj_out.weight, c.proj_width * c.out_channels);
    read_array(r, p.proj_out.bias, c.out_channels);
    if (!r.at_end())
        throw FormatError(path + ": trailing bytes at offset " + std::to_string(r.offset()));
    p.validate();
    return ckpt;
}

}  // namespace hno
