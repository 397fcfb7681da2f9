// Copyright Contributors to the maxrec Project
// SPDX-License-Identifier: Apache-2.0

#include "maxrec/record.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maxrec/rng.hpp"

namespace maxrec {

namespace {

constexpr char kMagic[] = "MXTDR1\n";
constexpr std::size_t kMagicLen = 7;

// Visit the record's scalar samples in the documented flat order:
// F block then G block; time-major, face-major, node-major, component-minor.
template <typename Fn>
void for_each_scalar(std::vector<BoundaryTrace>& block, Fn&& fn)
{
    for (auto& trace : block)
        for (int f = 0; f < 6; ++f)
            for (double& s : trace.face[f])
                fn(s);
}

template <typename Fn>
void for_each_scalar(const std::vector<BoundaryTrace>& block, Fn&& fn)
{
    for (const auto& trace : block)
        for (int f = 0; f < 6; ++f)
            for (const double& s : trace.face[f])
                fn(s);
}

} // namespace

BoundaryRecord add_noise(const BoundaryRecord& record, const NoiseSpec& spec)
{
    if (spec.delta == 0.0)
        return record;

    BoundaryRecord out = record;
    Xoshiro256ss rng(spec.seed);
    const double delta = spec.delta;
    for_each_scalar(out.f, [&](double& s) { s *= 1.0 + delta * rng.symmetric(); });
    for_each_scalar(out.g, [&](double& s) { s *= 1.0 + delta * rng.symmetric(); });
    return out;
}

ModeData project_record(const BoundaryRecord& record, const BasisSet& basis)
{
    if (static_cast<int>(record.f.size()) != record.time.num_samples ||
        static_cast<int>(record.g.size()) != record.time.num_samples)
        throw ShapeError("project_record: sample count does not match the record's TimeGrid");

    const Mat w = projection_weights(record.time, basis);
    const int np1 = basis.order() + 1;

    ModeData modes;
    modes.grid = record.grid;
    modes.order = basis.order();
    modes.f.assign(np1, BoundaryTrace(record.grid));
    modes.g.assign(np1, BoundaryTrace(record.grid));

    for (int k = 0; k < record.time.num_samples; ++k) {
        for (int n = 0; n < np1; ++n) {
            const double wk = w(n, k);
            if (wk == 0.0)
                continue;
            for (int f = 0; f < 6; ++f) {
                const auto& src_f = record.f[k].face[f];
                const auto& src_g = record.g[k].face[f];
                auto& dst_f = modes.f[n].face[f];
                auto& dst_g = modes.g[n].face[f];
                for (std::size_t q = 0; q < src_f.size(); ++q) {
                    dst_f[q] += wk * src_f[q];
                    dst_g[q] += wk * src_g[q];
                }
            }
        }
    }
    return modes;
}

void save_record(const BoundaryRecord& record, const std::filesystem::path& path)
{
    nlohmann::json header;
    header["arrays"] = "F,G";
    header["endian"] = "LE";
    header["lo"] = record.grid.lo;
    header["hi"] = record.grid.hi;
    header["n"] = record.grid.n;
    header["num_samples"] = record.time.num_samples;
    header["T"] = record.time.final_time;
    header["order"] = "time-major,face-major,node-major,component-minor";

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("save_record: cannot open '" + path.string() + "' for writing");
    out.write(kMagic, kMagicLen);
    const std::string hdr = header.dump();
    out.write(hdr.data(), static_cast<std::streamsize>(hdr.size()));
    out.put('\n');

    auto write_block = [&](const std::vector<BoundaryTrace>& block) {
        for_each_scalar(block, [&](const double& s) {
            std::uint64_t bits;
            std::memcpy(&bits, &s, sizeof bits);
            unsigned char bytes[8];
            for (int b = 0; b < 8; ++b)
                bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
            out.write(reinterpret_cast<const char*>(bytes), 8);
        });
    };
    write_block(record.f);
    write_block(record.g);
    if (!out)
        throw IoError("save_record: write failed for '" + path.string() + "'");
}

BoundaryRecord load_record(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("load_record: cannot open '" + path.string() + "'");

    char magic[kMagicLen];
    in.read(magic, kMagicLen);
    if (in.gcount() != static_cast<std::streamsize>(kMagicLen) ||
        std::memcmp(magic, kMagic, kMagicLen) != 0)
        throw BadMagicError("load_record: '" + path.string() + "' is not an MXTDR1 file");

    std::string hdr;
    if (!std::getline(in, hdr))
        throw TruncatedPayloadError("load_record: header line missing in '" + path.string() +
                                    "'");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(hdr);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_record: malformed header in '" + path.string() + "': " + e.what());
    }

    Grid3 grid;
    TimeGrid time;
    try {
        const auto lo = header.at("lo").get<std::array<double, 3>>();
        const auto hi = header.at("hi").get<std::array<double, 3>>();
        const auto n = header.at("n").get<std::array<int, 3>>();
        grid = Grid3(lo, hi, n);
        time = TimeGrid(header.at("T").get<double>(), header.at("num_samples").get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("load_record: header fields missing or invalid in '" + path.string() +
                      "': " + e.what());
    }

    BoundaryRecord record(grid, time);
    const std::size_t expected = 2 * record.scalars_per_block();

    // measure the remaining payload before reading
    const auto payload_start = in.tellg();
    in.seekg(0, std::ios::end);
    const auto payload_bytes = static_cast<std::size_t>(in.tellg() - payload_start);
    in.seekg(payload_start);
    if (payload_bytes != expected * 8)
        throw SizeMismatchError("load_record: '" + path.string() + "' payload holds " +
                                std::to_string(payload_bytes / 8) + " doubles, header implies " +
                                std::to_string(expected));

    auto read_block = [&](std::vector<BoundaryTrace>& block) {
        for_each_scalar(block, [&](double& s) {
            unsigned char bytes[8];
            in.read(reinterpret_cast<char*>(bytes), 8);
            if (in.gcount() != 8)
                throw TruncatedPayloadError("load_record: payload of '" + path.string() +
                                            "' ended mid-sample");
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b)
                bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
            std::memcpy(&s, &bits, sizeof s);
        });
    };
    read_block(record.f);
    read_block(record.g);
    return record;
}

} // namespace maxrec
