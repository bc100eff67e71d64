// Command-line harness wiring the generators, training loop, evaluator and
// signal-analysis demo into reproducible experiments.
//
// Exit codes: 0 success, 2 config/usage error, 3 runtime numerical failure,
// 4 verification failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hno/config.hpp"
#include "hno/datagen.hpp"
#include "hno/dataset.hpp"
#include "hno/errors.hpp"
#include "hno/hilbert.hpp"
#include "hno/operator.hpp"
#include "hno/presets.hpp"
#include "hno/rng.hpp"
#include "hno/training.hpp"

namespace {

using namespace hno;
using clock_type = std::chrono::steady_clock;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 4;

double elapsed(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
};

Config load_config(const CommonOpts& opts, const std::vector<std::string>& allowed) {
    Config cfg = opts.config_path.empty() ? Config{} : Config::parse_file(opts.config_path);
    cfg.restrict_keys(allowed);
    if (opts.seed) cfg.set("seed", std::to_string(*opts.seed));
    return cfg;
}

void ensure_parent_dir(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

// ---------------------------------------------------------------- gen-data

const std::vector<std::string> kGenBurgersKeys = {"seed",  "samples", "resolution", "steps",
                                                  "nu",    "t_final", "alpha",      "tau",
                                                  "amplitude"};
const std::vector<std::string> kGenDarcyKeys = {"seed",       "samples",   "resolution",
                                                "alpha",      "tau",       "amplitude",
                                                "coeff_high", "coeff_low", "threshold"};
const std::vector<std::string> kGenLorenzKeys = {
    "seed",          "samples",     "resolution",  "dt",
    "sigma",         "rho",         "beta",        "x0",
    "y0",            "z0",          "forcing_alpha", "forcing_tau",
    "forcing_amplitude"};

int cmd_gen_data(const std::string& problem, const CommonOpts& opts, const std::string& out) {
    if (out.empty()) throw ConfigError("gen-data: missing required --out path");
    const auto t0 = clock_type::now();
    DatasetPair pair;
    if (problem == "burgers1d") {
        Config cfg = load_config(opts, kGenBurgersKeys);
        BurgersDatasetConfig c;
        c.seed = cfg.get_u64("seed");
        c.samples = cfg.get_size_or("samples", c.samples);
        c.resolution = cfg.get_size_or("resolution", c.resolution);
        c.steps = cfg.get_size_or("steps", c.steps);
        c.nu = cfg.get_double_or("nu", c.nu);
        c.t_final = cfg.get_double_or("t_final", c.t_final);
        c.alpha = cfg.get_double_or("alpha", c.alpha);
        c.tau = cfg.get_double_or("tau", c.tau);
        c.amplitude = cfg.get_double_or("amplitude", c.amplitude);
        if (!(c.nu > 0.0)) throw ConfigError("key 'nu': must be positive");
        pair = make_burgers_dataset(c);
    } else if (problem == "darcy2d") {
        Config cfg = load_config(opts, kGenDarcyKeys);
        DarcyDatasetConfig c;
        c.seed = cfg.get_u64("seed");
        c.samples = cfg.get_size_or("samples", c.samples);
        c.resolution = cfg.get_size_or("resolution", c.resolution);
        c.alpha = cfg.get_double_or("alpha", c.alpha);
        c.tau = cfg.get_double_or("tau", c.tau);
        c.amplitude = cfg.get_double_or("amplitude", c.amplitude);
        c.coeff_high = cfg.get_double_or("coeff_high", c.coeff_high);
        c.coeff_low = cfg.get_double_or("coeff_low", c.coeff_low);
        c.threshold = cfg.get_double_or("threshold", c.threshold);
        if (!(c.coeff_high > 0.0) || !(c.coeff_low > 0.0))
            throw ConfigError("key 'coeff_high'/'coeff_low': coefficients must be positive");
        pair = make_darcy_dataset(c);
    } else if (problem == "lorenz63") {
        Config cfg = load_config(opts, kGenLorenzKeys);
        LorenzDatasetConfig c;
        c.seed = cfg.get_u64("seed");
        c.samples = cfg.get_size_or("samples", c.samples);
        c.resolution = cfg.get_size_or("resolution", c.resolution);
        c.dt = cfg.get_double_or("dt", c.dt);
        c.params.sigma = cfg.get_double_or("sigma", c.params.sigma);
        c.params.rho = cfg.get_double_or("rho", c.params.rho);
        c.params.beta = cfg.get_double_or("beta", c.params.beta);
        c.initial[0] = cfg.get_double_or("x0", c.initial[0]);
        c.initial[1] = cfg.get_double_or("y0", c.initial[1]);
        c.initial[2] = cfg.get_double_or("z0", c.initial[2]);
        c.forcing_alpha = cfg.get_double_or("forcing_alpha", c.forcing_alpha);
        c.forcing_tau = cfg.get_double_or("forcing_tau", c.forcing_tau);
        c.forcing_amplitude = cfg.get_double_or("forcing_amplitude", c.forcing_amplitude);
        if (!(c.dt > 0.0)) throw ConfigError("key 'dt': must be positive");
        pair = make_lorenz_dataset(c);
    } else {
        throw ConfigError("gen-data: unknown problem '" + problem +
                          "' (expected burgers1d, darcy2d or lorenz63)");
    }
    ensure_parent_dir(out);
    write_dataset(pair, out);
    std::printf("problem      %s\n", pair.problem.c_str());
    std::printf("samples      %zu\n", pair.samples());
    std::printf("resolution  ");
    for (std::size_t e : pair.inputs.spatial_shape()) std::printf(" %zu", e);
    std::printf("\nseed         %s\n", pair.metadata.at("seed").c_str());
    std::printf("wall_seconds %.2f\n", elapsed(t0));
    std::printf("wrote        %s\n", out.c_str());
    return kExitOk;
}

// -------------------------------------------------------------------- train

const std::vector<std::string> kTrainKeys = {
    "seed",       "dataset",    "out_dir",      "layer_kind",     "epochs",
    "batch_size", "learning_rate", "beta1",     "beta2",          "epsilon",
    "weight_decay", "layers",   "width",        "modes",          "activation",
    "hilbert_axis", "coord_features", "proj_width", "validation_fraction"};

TrainConfig train_config_from(const Config& cfg, const DatasetPair& data) {
    TrainConfig tc = presets::train_defaults(data.problem);
    tc.seed = cfg.get_u64("seed");
    tc.epochs = cfg.get_size_or("epochs", tc.epochs);
    tc.batch_size = cfg.get_size_or("batch_size", tc.batch_size);
    tc.adam.learning_rate = cfg.get_double_or("learning_rate", tc.adam.learning_rate);
    tc.adam.beta1 = cfg.get_double_or("beta1", tc.adam.beta1);
    tc.adam.beta2 = cfg.get_double_or("beta2", tc.adam.beta2);
    tc.adam.epsilon = cfg.get_double_or("epsilon", tc.adam.epsilon);
    tc.adam.weight_decay = cfg.get_double_or("weight_decay", tc.adam.weight_decay);
    tc.validation_fraction = cfg.get_double_or("validation_fraction", tc.validation_fraction);
    tc.model.kind = layer_kind_from_string(cfg.get_string_or("layer_kind", "hno"));
    tc.model.layers = cfg.get_size_or("layers", tc.model.layers);
    tc.model.width = cfg.get_size_or("width", tc.model.width);
    tc.model.modes = cfg.get_size_list_or("modes", tc.model.modes);
    tc.model.activation =
        activation_from_string(cfg.get_string_or("activation", to_string(tc.model.activation)));
    tc.model.hilbert_axis = cfg.get_size_or("hilbert_axis", tc.model.hilbert_axis);
    tc.model.coord_features = cfg.get_bool_or("coord_features", tc.model.coord_features);
    tc.model.proj_width = cfg.get_size_or("proj_width", tc.model.proj_width);
    tc.validate();
    return tc;
}

int cmd_train(const CommonOpts& opts, const std::string& out_override) {
    Config cfg = load_config(opts, kTrainKeys);
    const std::string dataset_path = cfg.get_string("dataset");
    const std::string out_dir =
        !out_override.empty() ? out_override : cfg.get_string_or("out_dir", "train_out");
    DatasetPair data = read_dataset(dataset_path);
    TrainConfig tc = train_config_from(cfg, data);

    std::filesystem::create_directories(out_dir);
    const auto t0 = clock_type::now();
    TrainResult res = train(data, tc);
    const double wall = elapsed(t0);

    const auto dir = std::filesystem::path(out_dir);
    write_report_csv(res.report, (dir / "report.csv").string());
    save_checkpoint((dir / "model_best.hnom").string(), res.best, data.problem);
    save_checkpoint((dir / "model_final.hnom").string(), res.final, data.problem);
    // persist the validation split so eval can reproduce the reported value
    {
        Rng split_rng(Rng::derive(tc.seed, 0));
        const auto perm = split_rng.permutation(data.samples());
        std::size_t n_val = static_cast<std::size_t>(
            std::llround(tc.validation_fraction * static_cast<double>(data.samples())));
        n_val = std::max<std::size_t>(1, std::min(n_val, data.samples() - 1));
        const std::vector<std::size_t> val_idx(perm.end() - n_val, perm.end());
        DatasetPair val;
        val.problem = data.problem;
        val.metadata = data.metadata;
        val.metadata["split"] = "validation";
        val.inputs = gather_samples(data.inputs, val_idx);
        val.outputs = gather_samples(data.outputs, val_idx);
        write_dataset(val, (dir / "val.nopd").string());
    }

    std::printf("layer_kind        %s\n", to_string(tc.model.kind));
    std::printf("epochs_completed  %zu\n", res.report.val_rel_l2.size());
    std::printf("wall_seconds      %.2f\n", wall);
    if (res.report.diverged) {
        std::fprintf(stderr, "train: diverged at epoch %zu; partial report written to %s\n",
                     res.report.diverged_epoch, (dir / "report.csv").c_str());
        return kExitNumeric;
    }
    std::printf("final_val_rel_l2  %.17g\n", res.report.final_val);
    if (opts.verbose)
        for (std::size_t e = 0; e < res.report.val_rel_l2.size(); ++e)
            std::printf("  epoch %3zu  train %.6f  val %.6f\n", e + 1, res.report.train_loss[e],
                        res.report.val_rel_l2[e]);
    return kExitOk;
}

// --------------------------------------------------------------------- eval

int cmd_eval(const std::string& checkpoint_path, const std::string& dataset_path,
             const CommonOpts& opts, const std::string& out_csv,
             const std::string& dump_predictions, std::size_t resolution_transfer) {
    (void)opts;
    Checkpoint ckpt = load_checkpoint(checkpoint_path);
    DatasetPair data = read_dataset(dataset_path);
    if (ckpt.problem_tag != data.problem)
        throw ConfigError("eval: checkpoint problem '" + ckpt.problem_tag +
                          "' does not match dataset problem '" + data.problem + "'");
    const auto res = data.inputs.spatial_shape();
    const auto trained = ckpt.params.config.resolution;
    if (resolution_transfer > 0) {
        for (std::size_t e : res)
            if (e != resolution_transfer)
                throw ConfigError("eval: dataset resolution does not match --resolution-transfer " +
                                  std::to_string(resolution_transfer));
    } else if (res != trained) {
        std::string msg = "eval: dataset resolution (";
        for (std::size_t e : res) msg += std::to_string(e) + " ";
        msg += ") does not match trained resolution (";
        for (std::size_t e : trained) msg += std::to_string(e) + " ";
        msg += "); pass --resolution-transfer to evaluate anyway";
        throw ConfigError(msg);
    }
    if (data.inputs.channels() != ckpt.params.config.in_channels)
        throw ConfigError("eval: dataset channels do not match the checkpoint");

    const std::vector<double> vals =
        per_sample_relative_l2(ckpt.params, data.inputs, data.outputs, 16);
    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    const double median = sorted.size() % 2 == 1
                              ? sorted[sorted.size() / 2]
                              : 0.5 * (sorted[sorted.size() / 2 - 1] + sorted[sorted.size() / 2]);
    const double worst = sorted.back();

    std::printf("samples        %zu\n", vals.size());
    std::printf("mean_rel_l2    %.17g\n", mean);
    std::printf("median_rel_l2  %.17g\n", median);
    std::printf("max_rel_l2     %.17g\n", worst);

    if (!out_csv.empty()) {
        ensure_parent_dir(out_csv);
        std::ofstream out(out_csv, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError(out_csv + ": cannot open for writing");
        out << "sample,rel_l2\n";
        char buf[64];
        for (std::size_t i = 0; i < vals.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, vals[i]);
            out << buf;
        }
    }
    if (!dump_predictions.empty()) {
        DatasetPair preds;
        preds.problem = data.problem;
        preds.metadata = data.metadata;
        preds.metadata["contents"] = "predictions";
        preds.inputs = data.inputs;
        RealField all = zeros_like(data.outputs);
        const std::size_t n = data.samples();
        const std::size_t row = all.size() / n;
        for (std::size_t start = 0; start < n; start += 16) {
            const std::size_t stop = std::min(n, start + 16);
            std::vector<std::size_t> rows(stop - start);
            for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = start + i;
            RealField pred = model_forward(gather_samples(data.inputs, rows), ckpt.params);
            std::copy(pred.raw().begin(), pred.raw().end(), all.raw().begin() + start * row);
        }
        preds.outputs = std::move(all);
        ensure_parent_dir(dump_predictions);
        write_dataset(preds, dump_predictions);
    }
    return kExitOk;
}

// ------------------------------------------------------------- hilbert-demo

int cmd_hilbert_demo(const std::string& input_csv, const std::string& out_csv,
                     std::size_t axis) {
    if (axis != 0) throw ConfigError("hilbert-demo: only axis 0 exists for 1D inputs");
    std::ifstream in(input_csv);
    if (!in) throw ConfigError("hilbert-demo: cannot open '" + input_csv + "'");
    std::vector<double> ts, vs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double a = 0.0, b = 0.0;
        char extra = 0;
        const int two = std::sscanf(line.c_str(), " %lf , %lf %c", &a, &b, &extra);
        if (two == 2) {
            ts.push_back(a);
            vs.push_back(b);
            continue;
        }
        const int one = std::sscanf(line.c_str(), " %lf %c", &a, &extra);
        if (one == 1) {
            ts.push_back(static_cast<double>(vs.size()));
            vs.push_back(a);
            continue;
        }
        throw ConfigError("hilbert-demo: non-numeric row at line " + std::to_string(lineno));
    }
    if (vs.empty()) throw ConfigError("hilbert-demo: empty input");

    RealField v({1, vs.size(), 1}, std::vector<double>(vs));
    AnalyticSignal sig = analytic_signal(v, 0);
    EnvelopePhase ep = instantaneous_envelope_phase(sig);

    ensure_parent_dir(out_csv);
    std::ofstream out(out_csv, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(out_csv + ": cannot open for writing");
    out << "t,v,hilbert_v,envelope,phase\n";
    char buf[160];
    for (std::size_t i = 0; i < vs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", ts[i], vs[i],
                      sig.imag_part[i], ep.envelope[i], ep.phase[i]);
        out << buf;
    }
    std::printf("rows    %zu\nwrote   %s\n", vs.size(), out_csv.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------- gradcheck

const std::vector<std::string> kGradcheckKeys = {
    "seed",      "layer_kind", "layers",    "width",       "modes",    "resolution",
    "activation", "hilbert_axis", "batch",  "tolerance",   "step",     "coordinates",
    "proj_width", "coord_features", "corrupt_vjp"};

int cmd_gradcheck(const CommonOpts& opts) {
    Config cfg = load_config(opts, kGradcheckKeys);
    ModelConfig mc;
    mc.kind = layer_kind_from_string(cfg.get_string_or("layer_kind", "hno"));
    mc.layers = cfg.get_size_or("layers", 2);
    mc.width = cfg.get_size_or("width", 4);
    mc.resolution = cfg.get_size_list_or("resolution", {32});
    mc.modes = cfg.get_size_list_or("modes", std::vector<std::size_t>(mc.resolution.size(), 8));
    mc.activation = activation_from_string(cfg.get_string_or("activation", "gelu"));
    mc.hilbert_axis = cfg.get_size_or("hilbert_axis", 0);
    mc.coord_features = cfg.get_bool_or("coord_features", true);
    mc.proj_width = cfg.get_size_or("proj_width", 8);
    mc.in_channels = 1;
    mc.out_channels = 1;
    const std::uint64_t seed = cfg.get_u64("seed");
    const std::size_t batch = cfg.get_size_or("batch", 2);

    ModelParams params = init_model(mc, Rng::derive(seed, 1));
    std::vector<std::size_t> shape;
    shape.push_back(batch);
    for (std::size_t e : mc.resolution) shape.push_back(e);
    shape.push_back(1);
    Rng rng(Rng::derive(seed, 2));
    RealField inputs(shape), targets(shape);
    for (double& x : inputs.raw()) x = rng.uniform(-1.0, 1.0);
    for (double& x : targets.raw()) x = rng.uniform(-1.0, 1.0);

    GradCheckOptions opt;
    opt.tolerance = cfg.get_double_or("tolerance", 1e-4);
    opt.step = cfg.get_double_or("step", 1e-5);
    opt.coordinates = cfg.get_size_or("coordinates", 200);
    opt.seed = Rng::derive(seed, 3);
    if (cfg.get_bool_or("corrupt_vjp", false)) {
        // negative-control fixture: a deliberately wrong vector-Jacobian
        // product that the check must reject
        opt.backward_fn = [](const ModelParams& p, const RealField& x, const RealField& y) {
            BackwardResult res = backward(p, x, y);
            for (double& w : res.grads.lift_weight) w *= 1.05;
            for (auto& l : res.grads.layers)
                for (Complex& z : l.kernel) z *= 1.05;
            return res;
        };
    }
    const GradCheckReport rep = gradient_check(params, inputs, targets, opt);
    std::printf("coordinates    %zu\n", rep.checked);
    std::printf("max_rel_dev    %.3e\n", rep.max_rel);
    std::printf("mean_rel_dev   %.3e\n", rep.mean_rel);
    std::printf("tolerance      %.3e\n", rep.tolerance);
    std::printf("result         %s\n", rep.pass ? "pass" : "FAIL");
    return rep.pass ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hilbert/Fourier neural operator benchmark harness"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "key = value configuration file")
        ->configurable(false);
    app.add_option("--seed", opts.seed, "override the config seed");
    app.add_flag("--verbose", opts.verbose, "per-epoch output where applicable");

    std::string gen_problem, gen_out;
    auto* gen = app.add_subcommand("gen-data", "generate a benchmark dataset file");
    gen->add_option("problem", gen_problem, "burgers1d|darcy2d|lorenz63")->required();
    gen->add_option("--out", gen_out, "output dataset path")->required();

    std::string train_out;
    auto* tr = app.add_subcommand("train", "train an operator per the config file");
    tr->add_option("--out", train_out, "output directory (overrides config out_dir)");

    std::string eval_ckpt, eval_data, eval_out, eval_dump;
    std::size_t eval_transfer = 0;
    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    ev->add_option("checkpoint", eval_ckpt, "model checkpoint (.hnom)")->required();
    ev->add_option("dataset", eval_data, "dataset file (.nopd)")->required();
    ev->add_option("--out", eval_out, "write per-sample metrics CSV here");
    ev->add_option("--dump-predictions", eval_dump, "write predictions in dataset format");
    ev->add_option("--resolution-transfer", eval_transfer,
                   "evaluate at a resolution other than the training one");

    std::string demo_in, demo_out;
    std::size_t demo_axis = 0;
    auto* demo = app.add_subcommand("hilbert-demo", "analytic-signal decomposition of a CSV");
    demo->add_option("input", demo_in, "CSV rows: v or t,v")->required();
    demo->add_option("--out", demo_out, "output CSV path")->required();
    demo->add_option("--axis", demo_axis, "transform axis (0 for 1D input)");

    auto* gc = app.add_subcommand("gradcheck", "finite-difference gradient verification");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(gen_problem, opts, gen_out);
        if (tr->parsed()) return cmd_train(opts, train_out);
        if (ev->parsed())
            return cmd_eval(eval_ckpt, eval_data, opts, eval_out, eval_dump, eval_transfer);
        if (demo->parsed()) return cmd_hilbert_demo(demo_in, demo_out, demo_axis);
        if (gc->parsed()) return cmd_gradcheck(opts);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitConfig;
}
