#include "fracns/checkpoint.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace fracns {
namespace {

constexpr std::array<char, 4> kMagic = {'F', 'N', 'S', '1'};

template <typename T>
void put_le(std::vector<char>& buf, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    buf.insert(buf.end(), bytes.begin(), bytes.end());
}

template <typename T>
T get_le(const char* p) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const PhysicalField& field, double time) {
    const std::size_t count = field.box.size();
    std::vector<char> buf;
    buf.reserve(4 + 4 + 8 + 3 * count * 8);
    buf.insert(buf.end(), kMagic.begin(), kMagic.end());
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(field.box.n()));
    put_le<double>(buf, time);
    for (const auto& comp : field.v)
        for (double v : comp) put_le<double>(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot open checkpoint for writing: " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointError("write failed: " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path.string());
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    constexpr std::size_t header = 4 + 4 + 8;
    if (buf.size() < header) throw CheckpointError("truncated checkpoint header: " + path.string());
    if (!std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
        throw CheckpointError("bad checkpoint magic (expected FNS1): " + path.string());

    const auto n = get_le<std::uint32_t>(buf.data() + 4);
    const double time = get_le<double>(buf.data() + 8);
    std::optional<BoxSpec> box;
    try {
        box.emplace(static_cast<int>(n));
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(std::string("bad grid size in checkpoint: ") + e.what());
    }
    const std::size_t count = box->size();
    if (buf.size() != header + 3 * count * sizeof(double))
        throw CheckpointError("checkpoint size mismatch (truncated or trailing bytes): " + path.string());

    Checkpoint cp{PhysicalField::zeros(*box), time};
    const char* p = buf.data() + header;
    for (auto& comp : cp.field.v)
        for (auto& v : comp) {
            v = get_le<double>(p);
            p += sizeof(double);
        }
    return cp;
}

SpectralField checkpoint_state(const PhysicalField& field) {
    auto u = to_spectral(field);
    for (auto& comp : u.c) comp[0] = 0.0;
    return u;
}

}  // namespace fracns
