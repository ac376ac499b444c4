// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/model_io.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "eigengs/error.hpp"

namespace eigengs {

static_assert(std::endian::native == std::endian::little, "EGS1 I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'E', 'G', 'S', '1'};

class Writer {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        out_.insert(out_.end(), p, p + n);
    }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u8(std::uint8_t v) { out_.push_back(v); }
    template <typename T>
    void array(std::span<const T> v) {
        bytes(v.data(), v.size_bytes());
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }
    std::span<const std::uint8_t> view() const { return out_; }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    void bytes(void* dst, std::size_t n) {
        if (n > in_.size() - pos_) {
            throw Error(ErrorKind::FormatError, "truncated EGS1 payload");
        }
        std::memcpy(dst, in_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, 4);
        return v;
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    template <typename T>
    std::vector<T> array(std::size_t count) {
        if (count > (in_.size() - pos_) / sizeof(T)) {
            throw Error(ErrorKind::FormatError, "declared array length exceeds payload");
        }
        std::vector<T> v(count);
        bytes(v.data(), count * sizeof(T));
        return v;
    }
    std::size_t remaining() const { return in_.size() - pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

} // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed in chunks for very large models.
    std::size_t offset = 0;
    while (offset < bytes.size()) {
        const std::size_t chunk = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
        crc = ::crc32(crc, bytes.data() + offset, static_cast<uInt>(chunk));
        offset += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> encode_egs1(const EigenGSModel& model) {
    const Eigenbasis& basis = model.basis;
    const EigenGaussianModel& g = model.gaussians;
    g.validate();
    const BasisShape expected{basis.shape().width, basis.shape().height, basis.shape().channels, basis.k()};
    if (!(g.shape == expected)) {
        throw Error(ErrorKind::ShapeError, "basis and Gaussian model shapes differ");
    }
    if (basis.components.size() != static_cast<std::size_t>(basis.k()) * basis.dim()) {
        throw Error(ErrorKind::ShapeError, "component matrix size mismatch");
    }

    Writer w;
    w.bytes(kMagic, 4);
    w.u32(kEgs1Version);
    w.u32(static_cast<std::uint32_t>(expected.width));
    w.u32(static_cast<std::uint32_t>(expected.height));
    w.u32(static_cast<std::uint32_t>(expected.channels));
    w.u32(static_cast<std::uint32_t>(expected.k));
    w.u32(static_cast<std::uint32_t>(g.count()));
    w.u32(static_cast<std::uint32_t>(g.low_count));
    w.u32(static_cast<std::uint32_t>(g.k_low));
    w.u8(static_cast<std::uint8_t>(basis.space()));
    w.array(basis.mean.data());
    w.array(std::span<const float>(basis.components));
    w.array(std::span<const double>(basis.eigenvalues));
    w.array(std::span<const float>(g.geometry.pos_raw));
    w.array(std::span<const float>(g.geometry.fac_raw));
    w.array(std::span<const float>(g.weights));
    w.u32(crc32(w.view()));
    return w.take();
}

EigenGSModel decode_egs1(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 + 4 + 7 * 4 + 1 + 4) {
        throw Error(ErrorKind::FormatError, "file too short for an EGS1 header");
    }
    std::uint32_t stored_crc;
    std::memcpy(&stored_crc, bytes.data() + bytes.size() - 4, 4);
    if (crc32(bytes.first(bytes.size() - 4)) != stored_crc) {
        throw Error(ErrorKind::FormatError, "CRC mismatch");
    }

    Reader r(bytes.first(bytes.size() - 4));
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        throw Error(ErrorKind::FormatError, "bad magic, not an EGS1 file");
    }
    const std::uint32_t version = r.u32();
    if (version != kEgs1Version) {
        throw Error(ErrorKind::FormatError, "unsupported EGS1 version " + std::to_string(version));
    }
    const auto width = static_cast<int>(r.u32());
    const auto height = static_cast<int>(r.u32());
    const auto channels = static_cast<int>(r.u32());
    const auto k = static_cast<int>(r.u32());
    const std::size_t count = r.u32();
    const auto low_count = static_cast<int>(r.u32());
    const auto k_low = static_cast<int>(r.u32());
    const std::uint8_t space_tag = r.u8();
    if (space_tag > static_cast<std::uint8_t>(ColorSpace::YCbCr)) {
        throw Error(ErrorKind::FormatError, "unknown color space tag");
    }
    if (width < 1 || height < 1 || k < 1 || (channels != 1 && channels != 3)) {
        throw Error(ErrorKind::FormatError, "invalid header dimensions");
    }
    const std::size_t d = static_cast<std::size_t>(width) * height * channels;

    EigenGSModel model;
    Eigenbasis& basis = model.basis;
    basis.mean = PlanarImage(width, height, channels, static_cast<ColorSpace>(space_tag), r.array<float>(d));
    basis.components = r.array<float>(static_cast<std::size_t>(k) * d);
    basis.eigenvalues = r.array<double>(static_cast<std::size_t>(k));

    EigenGaussianModel& g = model.gaussians;
    g.shape = {width, height, channels, k};
    g.low_count = low_count;
    g.k_low = k_low;
    g.geometry.pos_raw = r.array<float>(count * 2);
    g.geometry.fac_raw = r.array<float>(count * 3);
    g.weights = r.array<float>(count * static_cast<std::size_t>(k) * channels);
    if (r.remaining() != 0) {
        throw Error(ErrorKind::FormatError, "trailing bytes after payload");
    }
    g.validate();
    return model;
}

void save_model(const std::filesystem::path& path, const EigenGSModel& model) {
    const auto bytes = encode_egs1(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

EigenGSModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_egs1(bytes);
}

} // namespace eigengs
