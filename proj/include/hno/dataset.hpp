#pragma once

#include <map>
#include <string>

#include "hno/field.hpp"

namespace hno {

// (input field a, output field u) samples; the batch axis is the sample
// axis. Metadata keys travel with the file and record the generator
// parameters and seed.
struct DatasetPair {
    RealField inputs;
    RealField outputs;
    std::string problem;
    std::map<std::string, std::string> metadata;

    std::size_t samples() const { return inputs.batch(); }
    void validate() const;
};

// On-disk format: magic "NOPD", version u32=1, little-endian throughout;
// problem tag and metadata as length-prefixed UTF-8; then each tensor as
// rank u32, dims u32 x rank, float64 payload row-major.
void write_dataset(const DatasetPair& pair, const std::string& path);
DatasetPair read_dataset(const std::string& path);

}  // namespace hno
