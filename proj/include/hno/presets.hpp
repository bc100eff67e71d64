#pragma once

#include <string>

#include "hno/datagen.hpp"
#include "hno/training.hpp"

namespace hno::presets {

// Desk-scale defaults shared by the CLI and the acceptance suite: minutes of
// CPU per run. Dataset defaults live on the *DatasetConfig initializers;
// these return the matching training configurations per problem tag
// (burgers1d, darcy2d, lorenz63).
TrainConfig train_defaults(const std::string& problem);

}  // namespace hno::presets
