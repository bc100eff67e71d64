#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hno/errors.hpp"
#include "hno/fft.hpp"
#include "hno/operator.hpp"
#include "hno/rng.hpp"
#include "hno/training.hpp"
#include "support.hpp"

using namespace hno;
using namespace testsupport;

namespace {

ModelParams tiny_model(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.kind = LayerKind::hno;
    cfg.layers = 1;
    cfg.width = 3;
    cfg.modes = {2};
    cfg.resolution = {8};
    cfg.in_channels = 1;
    cfg.out_channels = 1;
    cfg.proj_width = 4;
    return init_model(cfg, seed);
}

// Synthetic linear-operator dataset: outputs are a fixed smooth spectral
// filter of the inputs, so a few epochs must already reduce the loss.
DatasetPair filter_dataset(std::size_t samples, std::size_t n, std::uint64_t seed) {
    DatasetPair d;
    d.problem = "synthetic";
    d.inputs = RealField({samples, n, 1});
    d.outputs = RealField({samples, n, 1});
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        RealField x({1, n, 1});
        for (double& v : x.raw()) v = rng.uniform(-1.0, 1.0);
        ComplexSpectrum spec = dft_forward(x, {0});
        for (std::size_t k = 0; k < n; ++k) {
            const double f = (2 * k <= n) ? double(k) : double(k) - double(n);
            spec[k] *= std::exp(-0.15 * f * f);
        }
        RealField y = take_real(dft_inverse(spec, {0}));
        std::copy(x.raw().begin(), x.raw().end(), d.inputs.raw().begin() + s * n);
        std::copy(y.raw().begin(), y.raw().end(), d.outputs.raw().begin() + s * n);
    }
    return d;
}

}  // namespace

TEST_CASE("adam leaves parameters alone under zero gradients, and moments decay") {
    ModelParams p = tiny_model(1);
    GradientSet g = GradientSet::zeros_like(p);
    AdamState st;
    AdamConfig cfg;
    // one nonzero step to charge the moments
    g.lift_bias[0] = 1.0;
    adam_step(p, g, st, cfg);
    // locate the charged coordinate: lift bias follows lift weight
    const std::size_t slot = p.lift.weight.size();
    const double m1 = st.m[slot];
    CHECK(m1 == doctest::Approx(0.1));
    ModelParams before = p;
    g.lift_bias[0] = 0.0;
    adam_step(p, g, st, cfg);
    CHECK(st.m[slot] == doctest::Approx(0.09));
    // every parameter other than the charged one is untouched
    auto pb = parameter_scalars(before);
    auto pa = parameter_scalars(p);
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (i != slot) CHECK(*pa[i] == *pb[i]);
}

TEST_CASE("adam single-step hand oracle") {
    // scalar theta = 0, g = 1, lr = 1e-3, defaults: after one step
    // theta = -lr * 1/(1 + eps)
    ModelParams p = tiny_model(2);
    for (double* s : parameter_scalars(p)) *s = 0.0;
    GradientSet g = GradientSet::zeros_like(p);
    g.proj_out_bias[0] = 1.0;
    AdamState st;
    AdamConfig cfg;
    adam_step(p, g, st, cfg);
    const double want = -1e-3 / (1.0 + 1e-8);
    CHECK(p.proj_out.bias[0] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("adam is deterministic and loss-scale invariant") {
    Rng rng(71);
    RealField in = random_field({4, 8, 1}, rng);
    RealField out = random_field({4, 8, 1}, rng);

    auto run = [&](std::uint64_t seed) {
        ModelParams p = tiny_model(seed);
        AdamState st;
        AdamConfig cfg;
        for (int i = 0; i < 10; ++i) {
            BackwardResult res = backward(p, in, out);
            adam_step(p, res.grads, st, cfg);
        }
        return p;
    };
    ModelParams a = run(5), b = run(5);
    auto sa = parameter_scalars(a), sb = parameter_scalars(b);
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(*sa[i] == *sb[i]);  // bitwise

    // scaling the gradients by c > 0 leaves the first step invariant up to
    // epsilon terms
    ModelParams p1 = tiny_model(9), p2 = tiny_model(9);
    BackwardResult res = backward(p1, in, out);
    GradientSet scaled = res.grads;
    auto gs = gradient_scalars(scaled);
    for (const double* g : gs) *const_cast<double*>(g) *= 37.0;
    AdamState s1, s2;
    AdamConfig cfg;
    adam_step(p1, res.grads, s1, cfg);
    adam_step(p2, scaled, s2, cfg);
    auto q1 = parameter_scalars(p1), q2 = parameter_scalars(p2);
    auto g1 = gradient_scalars(res.grads);
    for (std::size_t i = 0; i < q1.size(); ++i) {
        if (std::abs(*g1[i]) < 1e-4) continue;  // epsilon-dominated slots
        CHECK(*q1[i] == doctest::Approx(*q2[i]).epsilon(1e-6));
    }
}

TEST_CASE("adam rejects non-finite gradients") {
    ModelParams p = tiny_model(3);
    GradientSet g = GradientSet::zeros_like(p);
    g.lift_weight[0] = std::numeric_limits<double>::quiet_NaN();
    AdamState st;
    CHECK_THROWS_AS(adam_step(p, g, st, AdamConfig{}), NumericError);
}

TEST_CASE("frozen training leaves the validation error unchanged") {
    DatasetPair d = filter_dataset(12, 16, 4);
    TrainConfig cfg;
    cfg.epochs = 1;
    cfg.batch_size = 4;
    cfg.adam.learning_rate = 0.0;
    cfg.seed = 13;
    cfg.validation_fraction = 0.25;
    cfg.model.kind = LayerKind::fno;
    cfg.model.layers = 1;
    cfg.model.width = 4;
    cfg.model.modes = {3};
    cfg.model.proj_width = 4;
    TrainResult res = train(d, cfg);
    REQUIRE(res.report.val_rel_l2.size() == 1);
    // the validation error of the returned model equals the recorded one
    Rng split_rng(Rng::derive(cfg.seed, 0));
    auto perm = split_rng.permutation(12);
    std::vector<std::size_t> val_idx(perm.begin() + 9, perm.end());
    RealField vi = gather_samples(d.inputs, val_idx);
    RealField vo = gather_samples(d.outputs, val_idx);
    auto vals = per_sample_relative_l2(res.final, vi, vo, cfg.batch_size);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= double(vals.size());
    CHECK(mean == doctest::Approx(res.report.val_rel_l2[0]).epsilon(1e-15));
    // lr = 0 keeps parameters at their initialization
    ModelConfig mc = cfg.model;
    mc.in_channels = 1;
    mc.out_channels = 1;
    mc.resolution = {16};
    ModelParams fresh = init_model(mc, Rng::derive(cfg.seed, 1));
    auto sa = parameter_scalars(res.final);
    auto sb = parameter_scalars(fresh);
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(*sa[i] == *sb[i]);
}

TEST_CASE("training is deterministic and reduces the loss on a learnable task") {
    DatasetPair d = filter_dataset(48, 32, 6);
    TrainConfig cfg;
    cfg.epochs = 25;
    cfg.batch_size = 8;
    cfg.seed = 21;
    cfg.model.kind = LayerKind::hno;
    cfg.model.layers = 2;
    cfg.model.width = 8;
    cfg.model.modes = {8};
    cfg.model.proj_width = 16;
    TrainResult r1 = train(d, cfg);
    TrainResult r2 = train(d, cfg);
    REQUIRE(r1.report.train_loss.size() == cfg.epochs);
    for (std::size_t e = 0; e < cfg.epochs; ++e) {
        CHECK(r1.report.train_loss[e] == r2.report.train_loss[e]);  // bitwise
        CHECK(r1.report.val_rel_l2[e] == r2.report.val_rel_l2[e]);
    }
    CHECK(r1.report.final_val == r1.report.val_rel_l2.back());
    CHECK(r1.report.train_loss.back() < 0.5 * r1.report.train_loss.front());
    // smoothed training loss decreases over the run
    auto moving5 = [&](std::size_t end) {
        double acc = 0.0;
        for (std::size_t e = end - 5; e < end; ++e) acc += r1.report.train_loss[e];
        return acc / 5.0;
    };
    CHECK(moving5(cfg.epochs) < moving5(5));
    // the best checkpoint is at least as good as the final one
    const double best =
        *std::min_element(r1.report.val_rel_l2.begin(), r1.report.val_rel_l2.end());
    auto vals = per_sample_relative_l2(
        r1.best, gather_samples(d.inputs, {43, 44, 45, 46, 47}),
        gather_samples(d.outputs, {43, 44, 45, 46, 47}), 8);
    (void)vals;
    CHECK(best <= r1.report.final_val + 1e-15);
}

TEST_CASE("divergence is flagged with a partial report") {
    DatasetPair d = filter_dataset(12, 16, 7);
    TrainConfig cfg;
    cfg.epochs = 6;
    cfg.batch_size = 4;
    cfg.adam.learning_rate = 1e30;  // guaranteed blow-up
    cfg.seed = 3;
    cfg.model.kind = LayerKind::fno;
    cfg.model.layers = 1;
    cfg.model.width = 4;
    cfg.model.modes = {3};
    cfg.model.proj_width = 4;
    TrainResult res = train(d, cfg);
    CHECK(res.report.diverged);
    CHECK(res.report.diverged_epoch >= 1);
    CHECK(res.report.train_loss.size() < cfg.epochs);
}

TEST_CASE("report CSV has the pinned header and 17-digit floats") {
    TrainReport rep;
    rep.train_loss = {0.5, 1.0 / 3.0};
    rep.val_rel_l2 = {0.25, 0.125};
    rep.seconds = {1.5, 2.5};
    const std::string path =
        (std::filesystem::temp_directory_path() / "hno_report_test.csv").string();
    write_report_csv(rep, path);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() ==
          "epoch,train_loss,val_rel_l2,seconds\n"
          "1,0.5,0.25,1.5\n"
          "2,0.33333333333333331,0.125,2.5\n");
    std::filesystem::remove(path);
}

TEST_CASE("config validation catches bad settings") {
    TrainConfig cfg;
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.epochs = 1;
    cfg.validation_fraction = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.validation_fraction = 0.5;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
