#include "nv2d/snapshot.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace nv2d {

namespace {

void write_raw(const std::string& path, const std::uint32_t* extents, std::size_t n_ext,
               const double* samples, std::size_t n_samples) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (fp == nullptr) throw std::runtime_error("cannot open " + path);
    const char magic[4] = {'N', 'V', '2', 'D'};
    std::fwrite(magic, 1, 4, fp);
    std::fwrite(&kSnapshotVersion, sizeof(std::uint32_t), 1, fp);
    std::fwrite(extents, sizeof(std::uint32_t), n_ext, fp);
    std::fwrite(samples, sizeof(double), n_samples, fp);
    std::fclose(fp);
}

} // namespace

void write_snapshot(const std::string& path, const Grid2D& g) {
    const std::uint32_t ext[2] = {static_cast<std::uint32_t>(g.spec().nx),
                                  static_cast<std::uint32_t>(g.spec().ny)};
    write_raw(path, ext, 2, g.data(), g.size());
}

void write_snapshot(const std::string& path, const Grid4D& f) {
    const std::uint32_t ext[4] = {
        static_cast<std::uint32_t>(f.xspec().nx), static_cast<std::uint32_t>(f.xspec().ny),
        static_cast<std::uint32_t>(f.pspec().nx), static_cast<std::uint32_t>(f.pspec().ny)};
    write_raw(path, ext, 4, f.data(), f.size());
}

SnapshotData read_snapshot(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (fp == nullptr) throw std::runtime_error("cannot open " + path);
    char magic[4];
    if (std::fread(magic, 1, 4, fp) != 4 || std::memcmp(magic, "NV2D", 4) != 0) {
        std::fclose(fp);
        throw std::runtime_error(path + ": not an NV2D snapshot");
    }
    std::uint32_t version = 0;
    if (std::fread(&version, sizeof(version), 1, fp) != 1 || version != kSnapshotVersion) {
        std::fclose(fp);
        throw std::runtime_error(path + ": unsupported snapshot version");
    }
    // the remaining layout is extents then samples; infer rank from file size
    const long header_pos = std::ftell(fp);
    std::fseek(fp, 0, SEEK_END);
    const long end = std::ftell(fp);
    std::fseek(fp, header_pos, SEEK_SET);
    SnapshotData out;
    for (std::size_t rank : {2u, 4u}) {
        std::fseek(fp, header_pos, SEEK_SET);
        std::vector<std::uint32_t> ext(rank);
        if (std::fread(ext.data(), sizeof(std::uint32_t), rank, fp) != rank) continue;
        std::size_t count = 1;
        for (std::uint32_t e : ext) count *= e;
        const long expect = header_pos + static_cast<long>(rank * sizeof(std::uint32_t) +
                                                           count * sizeof(double));
        if (expect == end) {
            out.extents = std::move(ext);
            out.samples.resize(count);
            if (std::fread(out.samples.data(), sizeof(double), count, fp) != count) {
                std::fclose(fp);
                throw std::runtime_error(path + ": truncated snapshot");
            }
            std::fclose(fp);
            return out;
        }
    }
    std::fclose(fp);
    throw std::runtime_error(path + ": inconsistent snapshot extents");
}

} // namespace nv2d
