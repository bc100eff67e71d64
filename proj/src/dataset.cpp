#include "hno/dataset.hpp"

#include <cstdint>

#include "hno/binio.hpp"
#include "hno/errors.hpp"

namespace hno {
namespace {

constexpr std::uint32_t kVersion = 1;

void write_tensor(detail::ByteWriter& w, const RealField& t) {
    w.u32(static_cast<std::uint32_t>(t.shape().size()));
    for (std::size_t d : t.shape()) w.u32(static_cast<std::uint32_t>(d));
    for (double v : t.raw()) w.f64(v);
}

RealField read_tensor(detail::ByteReader& r, const std::string& path) {
    const std::uint32_t rank = r.u32();
    if (rank < 2 || rank > 8)
        throw FormatError(path + ": implausible tensor rank " + std::to_string(rank) +
                          " at offset " + std::to_string(r.offset()));
    std::vector<std::size_t> shape(rank);
    std::size_t total = 1;
    for (auto& d : shape) {
        d = r.u32();
        if (d == 0) throw FormatError(path + ": zero tensor extent");
        total *= d;
    }
    r.need(8 * total, "tensor payload");
    std::vector<double> data(total);
    for (double& v : data) v = r.f64();
    return RealField(std::move(shape), std::move(data));
}

}  // namespace

void DatasetPair::validate() const {
    if (inputs.batch() != outputs.batch())
        throw std::invalid_argument("DatasetPair: input/output sample counts differ");
    if (!inputs.all_finite() || !outputs.all_finite())
        throw std::invalid_argument("DatasetPair: non-finite entries");
}

void write_dataset(const DatasetPair& pair, const std::string& path) {
    pair.validate();
    detail::ByteWriter w;
    w.bytes("NOPD", 4);
    w.u32(kVersion);
    w.str(pair.problem);
    w.u32(static_cast<std::uint32_t>(pair.metadata.size()));
    for (const auto& [k, v] : pair.metadata) {
        w.str(k);
        w.str(v);
    }
    write_tensor(w, pair.inputs);
    write_tensor(w, pair.outputs);
    detail::write_file_bytes(path, w.data());
}

DatasetPair read_dataset(const std::string& path) {
    detail::ByteReader r(detail::read_file_bytes(path), path);
    r.expect_magic("NOPD");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw FormatError(path + ": unsupported dataset version " + std::to_string(version));
    DatasetPair pair;
    pair.problem = r.str();
    const std::uint32_t n_keys = r.u32();
    for (std::uint32_t i = 0; i < n_keys; ++i) {
        std::string k = r.str();
        std::string v = r.str();
        pair.metadata.emplace(std::move(k), std::move(v));
    }
    pair.inputs = read_tensor(r, path);
    pair.outputs = read_tensor(r, path);
    if (!r.at_end())
        throw FormatError(path + ": trailing bytes at offset " + std::to_string(r.offset()));
    pair.validate();
    return pair;
}

}  // namespace hno
