#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hno/dataset.hpp"
#include "hno/field.hpp"
#include "hno/operator.hpp"

namespace hno {

// One real array per parameter array of ModelParams, congruent shapes.
// Complex kernel gradients are stored as Complex with the convention
// g = dL/dRe + i dL/dIm, i.e. both real components carried separately.
struct GradientSet {
    std::vector<double> lift_weight, lift_bias;
    struct Layer {
        std::vector<Complex> kernel;
        std::vector<double> weight, bias;
    };
    std::vector<Layer> layers;
    std::vector<double> proj_hidden_weight, proj_hidden_bias;
    std::vector<double> proj_out_weight, proj_out_bias;

    static GradientSet zeros_like(const ModelParams& params);
    bool all_finite() const;
};

// Flat views over every real scalar, in declaration order (complex entries
// contribute re then im). The same order is used by the checkpoint format,
// Adam state and the finite-difference check.
std::vector<double*> parameter_scalars(ModelParams& params);
std::vector<const double*> gradient_scalars(const GradientSet& grads);

// Mean over the batch of ||pred - truth||_2 / ||truth||_2, the norm taken
// over spatial and channel axes per sample. A zero-norm truth sample is a
// degenerate-sample error.
double relative_l2(const RealField& pred, const RealField& truth);

struct BackwardResult {
    double loss = 0.0;
    GradientSet grads;
};

// Exact reverse-mode gradient of relative_l2(model_forward(inputs), targets)
// with respect to every parameter. A non-finite loss aborts with a
// diagnostic naming the first non-finite intermediate.
BackwardResult backward(const ModelParams& params, const RealField& inputs,
                        const RealField& targets);

struct GradCheckOptions {
    double tolerance = 1e-4;
    double step = 1e-5;
    std::size_t coordinates = 200;  // random parameter subsample size
    std::uint64_t seed = 0;
    // Injection point for negative-control fixtures; defaults to backward().
    std::function<BackwardResult(const ModelParams&, const RealField&, const RealField&)>
        backward_fn;
};

struct GradCheckReport {
    double max_rel = 0.0;
    double mean_rel = 0.0;
    std::size_t checked = 0;
    double tolerance = 0.0;
    bool pass = false;
};

// Central finite differences against the analytic gradient on a seeded
// random subsample of parameter coordinates. Failures are reported, not
// thrown.
GradCheckReport gradient_check(const ModelParams& params, const RealField& inputs,
                               const RealField& targets, const GradCheckOptions& opt = {});

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;
};

struct AdamState {
    std::vector<double> m, v;
    std::uint64_t step = 0;
};

// Standard Adam with bias correction; complex spectral weights update as two
// independent real coordinates. Non-finite gradients abort.
void adam_step(ModelParams& params, const GradientSet& grads, AdamState& state,
               const AdamConfig& cfg);

struct TrainConfig {
    std::size_t epochs = 50;
    std::size_t batch_size = 16;
    AdamConfig adam;
    std::uint64_t seed = 0;
    double validation_fraction = 0.2;
    // kind, layers, width, modes, activation, hilbert axis, coordinate flag
    // and projection width are taken from here; in/out channels and
    // resolution are filled in from the dataset.
    ModelConfig model;

    void validate() const;
};

struct TrainReport {
    std::vector<double> train_loss;   // per epoch
    std::vector<double> val_rel_l2;   // per epoch
    std::vector<double> seconds;      // wall clock per epoch
    double final_val = 0.0;           // last recorded validation error
    bool diverged = false;
    std::size_t diverged_epoch = 0;   // 1-based epoch at which training aborted
    std::uint64_t seed = 0;
    TrainConfig config;               // echo of the effective configuration
};

struct TrainResult {
    ModelParams best;    // lowest validation error seen
    ModelParams final;   // parameters after the last epoch
    TrainReport report;
};

// Seeded split and per-epoch shuffles; per-batch optimizer steps; validation
// relative-L2 recorded each epoch. Divergence (loss > 1e6 or non-finite)
// aborts early with the partial report flagged.
TrainResult train(const DatasetPair& data, const TrainConfig& cfg);

// Per-sample relative-L2 of the model over a dataset slice, evaluated in
// batches of at most batch_size. The same code path backs validation during
// training and the standalone evaluator.
std::vector<double> per_sample_relative_l2(const ModelParams& params, const RealField& inputs,
                                           const RealField& targets, std::size_t batch_size);

// CSV with header epoch,train_loss,val_rel_l2,seconds and one row per
// recorded epoch, floats printed with 17 significant digits.
void write_report_csv(const TrainReport& report, const std::string& path);

}  // namespace hno
