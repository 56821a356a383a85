#include "t2m/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "t2m/errors.hpp"

namespace t2m {

namespace {

constexpr char kMagic[8] = {'N', 'T', 'E', 'N', 'S', 'O', 'R', '\0'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "big-endian hosts need byte swaps in checkpoint I/O");

template <typename T>
void write_pod(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const std::string& path) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw InputError("checkpoint " + path + ": truncated file");
    return v;
}

}  // namespace

void TensorStore::put(const std::string& name, Tensor t) {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] == name) {
            tensors_[i] = std::move(t);
            return;
        }
    }
    order_.push_back(name);
    tensors_.push_back(std::move(t));
}

bool TensorStore::contains(const std::string& name) const {
    for (const auto& n : order_) {
        if (n == name) return true;
    }
    return false;
}

const Tensor& TensorStore::get(const std::string& name) const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] == name) return tensors_[i];
    }
    throw InputError("checkpoint: missing tensor '" + name + "'");
}

std::optional<Tensor> TensorStore::find(const std::string& name) const {
    for (std::size_t i = 0; i < order_.size(); ++i) {
        if (order_[i] == name) return tensors_[i];
    }
    return std::nullopt;
}

double TensorStore::get_scalar(const std::string& name) const {
    const Tensor& t = get(name);
    if (!t.is_scalar()) {
        throw InputError("checkpoint: tensor '" + name + "' is not scalar");
    }
    return t[0];
}

void TensorStore::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InputError("checkpoint: cannot open '" + path + "' for writing");
    os.write(kMagic, sizeof(kMagic));
    write_pod(os, kVersion);
    write_pod(os, static_cast<std::uint64_t>(order_.size()));
    for (std::size_t i = 0; i < order_.size(); ++i) {
        const std::string& name = order_[i];
        const Tensor& t = tensors_[i];
        write_pod(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod(os, static_cast<std::uint32_t>(t.ndim()));
        for (int d = 0; d < t.ndim(); ++d) write_pod(os, static_cast<std::uint32_t>(t.dim(d)));
        os.write(reinterpret_cast<const char*>(t.data()),
                 static_cast<std::streamsize>(t.numel() * sizeof(double)));
    }
    if (!os) throw InputError("checkpoint: write failed for '" + path + "'");
}

TensorStore TensorStore::load(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("checkpoint: cannot open '" + path + "'");
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw InputError("checkpoint " + path + ": bad magic header");
    }
    const auto version = read_pod<std::uint32_t>(is, path);
    if (version != kVersion) {
        throw InputError("checkpoint " + path + ": unsupported format version " +
                         std::to_string(version));
    }
    const auto count = read_pod<std::uint64_t>(is, path);
    TensorStore store;
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto name_len = read_pod<std::uint32_t>(is, path);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        if (!is) throw InputError("checkpoint " + path + ": truncated file");
        const auto ndim = read_pod<std::uint32_t>(is, path);
        std::vector<int> shape(ndim);
        std::size_t numel = 1;
        for (auto& d : shape) {
            d = static_cast<int>(read_pod<std::uint32_t>(is, path));
            numel *= static_cast<std::size_t>(d);
        }
        std::vector<double> values(numel);
        is.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(numel * sizeof(double)));
        if (!is) throw InputError("checkpoint " + path + ": truncated file");
        store.put(name, Tensor(std::move(shape), std::move(values)));
    }
    return store;
}

}  // namespace t2m
