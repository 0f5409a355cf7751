#include "fmcw/frame.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "fmcw/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "frame dump I/O assumes a little-endian host");

namespace fmcw {

FrameCube FrameCube::make_real(std::size_t samples, std::size_t chirps, double rate_hz) {
    FrameCube c;
    c.kind_ = FrameKind::real;
    c.samples_ = samples;
    c.chirps_ = chirps;
    c.rate_hz_ = rate_hz;
    c.re_.assign(samples * chirps, 0.0);
    return c;
}

FrameCube FrameCube::make_complex(std::size_t samples, std::size_t chirps, double rate_hz) {
    FrameCube c;
    c.kind_ = FrameKind::complex_valued;
    c.samples_ = samples;
    c.chirps_ = chirps;
    c.rate_hz_ = rate_hz;
    c.cx_.assign(samples * chirps, {0.0, 0.0});
    return c;
}

bool FrameCube::all_finite() const {
    for (double v : re_)
        if (!std::isfinite(v)) return false;
    for (const auto& v : cx_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

namespace {

constexpr char kMagic[8] = {'F', 'M', 'C', 'W', 'C', 'U', 'B', 'E'};
constexpr std::uint32_t kVersion = 1;

struct Header {
    std::uint32_t kind;
    std::uint64_t samples;
    std::uint64_t chirps;
    double rate;
    std::uint64_t hash;
};

void write_header(std::ofstream& os, const Header& h) {
    os.write(kMagic, sizeof(kMagic));
    os.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    os.write(reinterpret_cast<const char*>(&h.kind), sizeof(h.kind));
    os.write(reinterpret_cast<const char*>(&h.samples), sizeof(h.samples));
    os.write(reinterpret_cast<const char*>(&h.chirps), sizeof(h.chirps));
    os.write(reinterpret_cast<const char*>(&h.rate), sizeof(h.rate));
    os.write(reinterpret_cast<const char*>(&h.hash), sizeof(h.hash));
}

Header read_header(std::ifstream& is, const std::string& path) {
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("not a frame dump: " + path);
    std::uint32_t version;
    is.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (version != kVersion)
        throw IoError("unsupported frame dump version in " + path);
    Header h{};
    is.read(reinterpret_cast<char*>(&h.kind), sizeof(h.kind));
    is.read(reinterpret_cast<char*>(&h.samples), sizeof(h.samples));
    is.read(reinterpret_cast<char*>(&h.chirps), sizeof(h.chirps));
    is.read(reinterpret_cast<char*>(&h.rate), sizeof(h.rate));
    is.read(reinterpret_cast<char*>(&h.hash), sizeof(h.hash));
    if (!is) throw IoError("truncated frame dump header: " + path);
    return h;
}

} // namespace

void write_frame_dump(const std::string& path, const FrameCube& cube) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path);
    Header h{cube.is_real() ? 0u : 1u, cube.samples(), cube.chirps(),
             cube.rate_hz(), cube.scenario_hash()};
    write_header(os, h);
    if (cube.is_real()) {
        os.write(reinterpret_cast<const char*>(cube.real_data().data()),
                 static_cast<std::streamsize>(cube.real_data().size() * sizeof(double)));
    } else {
        os.write(reinterpret_cast<const char*>(cube.cplx_data().data()),
                 static_cast<std::streamsize>(cube.cplx_data().size() *
                                              sizeof(std::complex<double>)));
    }
    if (!os) throw IoError("write failed: " + path);
}

void write_iq_dump(const std::string& path, const FrameCube& i, const FrameCube& q) {
    if (!i.is_real() || !q.is_real() || !i.same_shape(q))
        throw DimensionMismatch("iq dump needs two real cubes of equal shape");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for write: " + path);
    Header h{2u, i.samples(), i.chirps(), i.rate_hz(), i.scenario_hash()};
    write_header(os, h);
    std::vector<double> row(2 * i.samples());
    for (std::size_t m = 0; m < i.chirps(); ++m) {
        for (std::size_t n = 0; n < i.samples(); ++n) {
            row[2 * n] = i.real_at(n, m);
            row[2 * n + 1] = q.real_at(n, m);
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!os) throw IoError("write failed: " + path);
}

FrameDump read_frame_dump(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open frame dump: " + path);
    const Header h = read_header(is, path);

    FrameDump dump;
    const std::size_t samples = h.samples;
    const std::size_t chirps = h.chirps;
    if (h.kind == 0) {
        dump.a = FrameCube::make_real(samples, chirps, h.rate);
        is.read(reinterpret_cast<char*>(dump.a.real_data().data()),
                static_cast<std::streamsize>(samples * chirps * sizeof(double)));
    } else if (h.kind == 1) {
        dump.a = FrameCube::make_complex(samples, chirps, h.rate);
        is.read(reinterpret_cast<char*>(dump.a.cplx_data().data()),
                static_cast<std::streamsize>(samples * chirps *
                                             sizeof(std::complex<double>)));
    } else if (h.kind == 2) {
        dump.is_iq_pair = true;
        dump.a = FrameCube::make_real(samples, chirps, h.rate);
        dump.b = FrameCube::make_real(samples, chirps, h.rate);
        std::vector<double> row(2 * samples);
        for (std::size_t m = 0; m < chirps; ++m) {
            is.read(reinterpret_cast<char*>(row.data()),
                    static_cast<std::streamsize>(row.size() * sizeof(double)));
            for (std::size_t n = 0; n < samples; ++n) {
                dump.a.real_at(n, m) = row[2 * n];
                dump.b.real_at(n, m) = row[2 * n + 1];
            }
        }
    } else {
        throw IoError("unknown frame dump kind in " + path);
    }
    if (!is) throw IoError("truncated frame dump payload: " + path);
    dump.a.set_provenance(h.hash, "");
    if (dump.is_iq_pair) dump.b.set_provenance(h.hash, "");
    return dump;
}

} // namespace fmcw
