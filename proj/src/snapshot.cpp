#include "kss/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "kss/error.hpp"

namespace kss {
namespace {

void put_u32(std::vector<unsigned char>& buf, std::size_t at, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) buf[at + b] = static_cast<unsigned char>(v >> (8 * b));
}
void put_u64(std::vector<unsigned char>& buf, std::size_t at, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) buf[at + b] = static_cast<unsigned char>(v >> (8 * b));
}
void put_f64(std::vector<unsigned char>& buf, std::size_t at, double v) {
    put_u64(buf, at, std::bit_cast<std::uint64_t>(v));
}
std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return v;
}
std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return v;
}

std::vector<unsigned char> header(const Grid& g, SnapshotKind kind, double time) {
    std::vector<unsigned char> buf(kSnapshotHeaderBytes, 0);
    std::memcpy(buf.data(), "KSSF", 4);
    put_u32(buf, 4, kSnapshotVersion);
    put_u32(buf, 8, static_cast<std::uint32_t>(g.dim()));
    for (int d = 0; d < 3; ++d) put_u64(buf, 16 + 8 * d, static_cast<std::uint64_t>(g.cells(d)));
    put_u32(buf, 40, static_cast<std::uint32_t>(kind));
    put_f64(buf, 48, time);
    return buf;
}

void append(std::vector<unsigned char>& buf, std::span<const double> values) {
    const std::size_t at = buf.size();
    buf.resize(at + 8 * values.size());
    for (std::size_t i = 0; i < values.size(); ++i) put_f64(buf, at + 8 * i, values[i]);
}

void write_file(const std::filesystem::path& path, const std::vector<unsigned char>& buf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open snapshot for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("failed writing snapshot: " + path.string());
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open snapshot: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SnapshotHeader parse_header(const std::vector<unsigned char>& buf, const std::string& name) {
    if (buf.size() < kSnapshotHeaderBytes || std::memcmp(buf.data(), "KSSF", 4) != 0)
        throw Error("not a snapshot file: " + name);
    SnapshotHeader h;
    h.version = get_u32(buf.data() + 4);
    h.dim = get_u32(buf.data() + 8);
    for (int d = 0; d < 3; ++d) h.cells[d] = get_u64(buf.data() + 16 + 8 * d);
    h.kind = static_cast<SnapshotKind>(get_u32(buf.data() + 40));
    h.time = std::bit_cast<double>(get_u64(buf.data() + 48));
    if (h.version != kSnapshotVersion) throw Error("unsupported snapshot version in " + name);
    return h;
}

void check_grid(const SnapshotHeader& h, const Grid& g, const std::string& name) {
    bool ok = h.dim == static_cast<std::uint32_t>(g.dim());
    for (int d = 0; d < 3; ++d) ok = ok && h.cells[d] == static_cast<std::uint64_t>(g.cells(d));
    if (!ok) throw Error("snapshot grid does not match: " + name);
}

void read_values(const std::vector<unsigned char>& buf, std::size_t offset, std::span<double> out,
                 const std::string& name) {
    if (buf.size() < offset + 8 * out.size()) throw Error("truncated snapshot: " + name);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::bit_cast<double>(get_u64(buf.data() + offset + 8 * i));
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& s, SnapshotKind kind,
                    double time) {
    if (kind == SnapshotKind::velocity) throw InvalidParameter("scalar snapshot with velocity kind");
    auto buf = header(s.grid(), kind, time);
    append(buf, s.values());
    write_file(path, buf);
}

void write_snapshot(const std::filesystem::path& path, const VectorField& v, double time) {
    auto buf = header(v.grid(), SnapshotKind::velocity, time);
    for (int d = 0; d < v.grid().dim(); ++d) append(buf, v.component(d));
    write_file(path, buf);
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
    return parse_header(read_file(path), path.string());
}

ScalarField read_scalar_snapshot(const std::filesystem::path& path, const Grid& grid,
                                 ScalarBc bc) {
    const auto buf = read_file(path);
    const auto h = parse_header(buf, path.string());
    check_grid(h, grid, path.string());
    ScalarField s(grid, bc);
    read_values(buf, kSnapshotHeaderBytes, s.values(), path.string());
    return s;
}

VectorField read_vector_snapshot(const std::filesystem::path& path, const Grid& grid) {
    const auto buf = read_file(path);
    const auto h = parse_header(buf, path.string());
    check_grid(h, grid, path.string());
    if (h.kind != SnapshotKind::velocity) throw Error("not a velocity snapshot: " + path.string());
    VectorField v(grid);
    std::size_t offset = kSnapshotHeaderBytes;
    for (int d = 0; d < grid.dim(); ++d) {
        read_values(buf, offset, v.component(d), path.string());
        offset += 8 * grid.face_count(d);
    }
    return v;
}

}  // namespace kss
