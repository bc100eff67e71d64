#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hno/field.hpp"
#include "hno/spectral.hpp"

namespace hno {

enum class Activation { identity, relu, gelu };
enum class LayerKind { fno, hno };

const char* to_string(Activation a);
const char* to_string(LayerKind k);
Activation activation_from_string(const std::string& s);
LayerKind layer_kind_from_string(const std::string& s);

double activate(Activation a, double x);
double activate_grad(Activation a, double x);

// Pointwise channel map: the same affine transform applied at every grid
// point (1x1 convolution semantics). weight is (out, in) row-major.
struct Affine {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weight;
    std::vector<double> bias;
};

RealField pointwise_affine(const RealField& field, const Affine& map);

struct LayerParams {
    SpectralKernel kernel;  // width -> width spectral mixing
    Affine local;           // width -> width pointwise map
};

struct ModelConfig {
    LayerKind kind = LayerKind::hno;
    std::size_t layers = 4;
    std::size_t width = 32;
    std::vector<std::size_t> modes;       // kept modes per spatial axis
    Activation activation = Activation::gelu;
    std::size_t hilbert_axis = 0;
    bool coord_features = true;           // append normalized grid coordinates before the lift
    std::size_t in_channels = 1;          // raw input channels, before coordinates
    std::size_t out_channels = 1;
    std::size_t proj_width = 128;
    std::vector<std::size_t> resolution;  // grid extents the kernels were sized for

    std::size_t spatial_rank() const { return resolution.size(); }
    std::size_t lift_in() const {
        return in_channels + (coord_features ? spatial_rank() : 0);
    }
    void validate() const;
};

struct ModelParams {
    ModelConfig config;
    Affine lift;                     // lift_in -> width
    std::vector<LayerParams> layers;
    Affine proj_hidden;              // width -> proj_width, activated
    Affine proj_out;                 // proj_width -> out_channels

    // Chained-dimension validation; construction-time errors, not call-time.
    void validate() const;
};

// Deterministic seeded initialization: spectral weights uniform in [-s, s]
// per real component with s = 1/(c_in*c_out); affine weights uniform
// fan-in scaled; biases zero.
ModelParams init_model(const ModelConfig& cfg, std::uint64_t seed);

// Adds one channel per spatial axis holding the normalized coordinate i/N.
RealField append_coordinate_channels(const RealField& field);

// real(idft(pad(contract(trunc(dft(v)))))) along the listed spatial axes.
RealField spectral_conv(const RealField& v, const SpectralKernel& kernel,
                        const std::vector<std::size_t>& axes);

// The spectral path of one operator layer over all spatial axes. For the
// Hilbert variant the leading transform is fused into the frequency domain
// (F{Hv} = h . F{v}) and the trailing inverse is -H. When kernel_input is
// non-null it receives the truncated spectrum entering the contraction,
// which reverse mode needs for the kernel cotangent.
RealField spectral_branch(const RealField& v, const SpectralKernel& kernel, LayerKind kind,
                          std::size_t hilbert_axis, ComplexSpectrum* kernel_input = nullptr);

// sigma(W v + b + spectral_conv(v, R))
RealField fno_layer(const RealField& v, const LayerParams& params, Activation act);

// sigma(W v + b + H^{-1}(spectral_conv(H v, R)))
RealField hno_layer(const RealField& v, const LayerParams& params, Activation act,
                    std::size_t hilbert_axis);

// Per-layer intermediates recorded by a taped forward pass.
struct LayerTape {
    RealField input;
    ComplexSpectrum kernel_input;
    RealField preact;
};

struct ForwardTape {
    RealField augmented;       // model input after coordinate channels
    std::vector<LayerTape> layers;
    RealField final_features;  // output of the last operator layer
    RealField proj_pre;        // proj_hidden preactivation
    RealField proj_hidden;     // after the hidden activation
    RealField prediction;
};

// Q(layer_T(...layer_1(P(a))...)); Q is a two-stage pointwise map with one
// hidden activation. Pass a tape to record intermediates for reverse mode.
RealField model_forward(const RealField& a, const ModelParams& params,
                        ForwardTape* tape = nullptr);

// Model checkpoint file: magic "HNOM", version 1, little-endian config block
// followed by the flat parameter arrays in declaration order.
struct Checkpoint {
    ModelParams params;
    std::string problem_tag;
};

void save_checkpoint(const std::string& path, const ModelParams& params,
                     const std::string& problem_tag);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hno
