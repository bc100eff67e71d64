#include "hno/presets.hpp"

#include <stdexcept>

namespace hno::presets {

TrainConfig train_defaults(const std::string& problem) {
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.batch_size = 16;
    cfg.adam = AdamConfig{};
    cfg.validation_fraction = 0.2;
    cfg.model.kind = LayerKind::hno;
    cfg.model.activation = Activation::gelu;
    cfg.model.hilbert_axis = 0;
    cfg.model.coord_features = true;
    cfg.model.proj_width = 128;
    if (problem == "burgers1d") {
        cfg.model.layers = 4;
        cfg.model.width = 32;
        cfg.model.modes = {16};
    } else if (problem == "darcy2d") {
        cfg.epochs = 20;
        cfg.model.layers = 4;
        cfg.model.width = 16;
        cfg.model.modes = {8, 8};
    } else if (problem == "lorenz63") {
        cfg.epochs = 12;
        cfg.model.layers = 4;
        cfg.model.width = 16;
        cfg.model.modes = {24};
    } else {
        throw std::invalid_argument("no training defaults for problem '" + problem + "'");
    }
    return cfg;
}

}  // namespace hno::presets
