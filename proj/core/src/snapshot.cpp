#include "burgers/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace burgers {
namespace {

constexpr std::array<char, 4> kMagic{'B', 'R', 'G', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), bytes.size())) throw std::runtime_error("snapshot: truncated input");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& field, double time) {
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.size()));
    put_le<double>(out, time);
    for (double v : field.physical()) put_le<double>(out, v);
    if (!out) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const Field& field, double time) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
    write_snapshot(out, field, time);
}

Snapshot read_snapshot(std::istream& in) {
    std::array<char, 4> magic;
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw std::runtime_error("snapshot: bad magic");
    }
    const auto n = get_le<std::uint32_t>(in);
    const auto time = get_le<double>(in);
    Grid grid(n);
    std::vector<double> samples(grid.size());
    for (auto& v : samples) v = get_le<double>(in);
    return Snapshot{time, std::move(samples)};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
    return read_snapshot(in);
}

void write_text(std::ostream& out, const Field& field) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    const auto v = field.physical();
    for (std::size_t j = 0; j < v.size(); ++j) out << field.grid().x(j) << ',' << v[j] << '\n';
}

void write_text(const std::filesystem::path& path, const Field& field) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("text export: cannot open " + path.string());
    write_text(out, field);
}

}  // namespace burgers
