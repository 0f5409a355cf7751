#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fmcw {

enum class FrameKind : std::uint32_t { real = 0, complex_valued = 1 };

// Sampled beat-signal frame: samples_per_chirp (fast time) x chirps (slow
// time), stored row-major [chirp][sample]. Immutable in spirit; pipeline
// stages return new cubes.
class FrameCube {
public:
    FrameCube() = default;

    static FrameCube make_real(std::size_t samples, std::size_t chirps, double rate_hz);
    static FrameCube make_complex(std::size_t samples, std::size_t chirps, double rate_hz);

    FrameKind kind() const { return kind_; }
    bool is_real() const { return kind_ == FrameKind::real; }
    std::size_t samples() const { return samples_; }
    std::size_t chirps() const { return chirps_; }
    double rate_hz() const { return rate_hz_; }

    std::uint64_t scenario_hash() const { return scenario_hash_; }
    const std::string& path_tag() const { return path_tag_; }
    void set_provenance(std::uint64_t hash, std::string path_tag) {
        scenario_hash_ = hash;
        path_tag_ = std::move(path_tag);
    }

    double& real_at(std::size_t sample, std::size_t chirp) {
        return re_[chirp * samples_ + sample];
    }
    double real_at(std::size_t sample, std::size_t chirp) const {
        return re_[chirp * samples_ + sample];
    }
    std::complex<double>& cplx_at(std::size_t sample, std::size_t chirp) {
        return cx_[chirp * samples_ + sample];
    }
    std::complex<double> cplx_at(std::size_t sample, std::size_t chirp) const {
        return cx_[chirp * samples_ + sample];
    }

    std::span<const double> real_chirp(std::size_t chirp) const {
        return {re_.data() + chirp * samples_, samples_};
    }
    std::span<double> real_chirp(std::size_t chirp) {
        return {re_.data() + chirp * samples_, samples_};
    }
    std::span<const std::complex<double>> cplx_chirp(std::size_t chirp) const {
        return {cx_.data() + chirp * samples_, samples_};
    }
    std::span<std::complex<double>> cplx_chirp(std::size_t chirp) {
        return {cx_.data() + chirp * samples_, samples_};
    }

    const std::vector<double>& real_data() const { return re_; }
    const std::vector<std::complex<double>>& cplx_data() const { return cx_; }
    std::vector<double>& real_data() { return re_; }
    std::vector<std::complex<double>>& cplx_data() { return cx_; }

    bool all_finite() const;
    bool same_shape(const FrameCube& other) const {
        return samples_ == other.samples_ && chirps_ == other.chirps_ &&
               rate_hz_ == other.rate_hz_;
    }

private:
    FrameKind kind_ = FrameKind::real;
    std::size_t samples_ = 0;
    std::size_t chirps_ = 0;
    double rate_hz_ = 0.0;
    std::uint64_t scenario_hash_ = 0;
    std::string path_tag_;
    std::vector<double> re_;
    std::vector<std::complex<double>> cx_;
};

// Binary frame dump. Little-endian header:
//   bytes 0..7   magic "FMCWCUBE"
//   u32          version (1)
//   u32          kind: 0 real, 1 complex (re/im interleaved), 2 iq_pair
//                (I/Q interleaved, both real channels)
//   u64          samples per chirp
//   u64          chirps
//   f64          sample rate, Hz
//   u64          scenario hash
// followed by f64 payload, row-major [chirp][sample]; two values per sample
// for kinds 1 and 2.
struct FrameDump {
    FrameCube a;      // real, complex, or the I channel
    FrameCube b;      // Q channel when iq_pair
    bool is_iq_pair = false;
};

void write_frame_dump(const std::string& path, const FrameCube& cube);
void write_iq_dump(const std::string& path, const FrameCube& i, const FrameCube& q);
FrameDump read_frame_dump(const std::string& path);

} // namespace fmcw
