#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stvmd/types.hpp"

namespace stvmd {

/// Additive white Gaussian noise, amplitude * N(0, 1), reproducible by seed.
struct NoiseSpec {
  double amplitude = 0.2;
  std::uint64_t seed = 0;
};

std::vector<double> white_noise(std::size_t count, const NoiseSpec& noise);

/// Fundamental offsets (Hz above 13) of the stepped test signal, one per second.
inline constexpr std::array<int, 8> kStepSequence{2, 5, 0, 6, 3, 1, 4, 7};

/// seq[floor(t)] + 13; durations past 8 s wrap around the sequence.
double stepped_fundamental_hz(double t);

/// Number of samples for a duration, round(fs * duration).
std::size_t sample_count(double fs, double duration);

/// sin(2 pi 20 t) + 0.5 sin(2 pi 28 t)
MultichannelSignal gen_two_tone(double fs, double duration);

/// Two channels sharing a 0.5-amplitude 36 Hz tone on top of 20 Hz / 28 Hz.
MultichannelSignal gen_common_mode_pair(double fs, double duration);

/// Stepped fundamental w(t) with its second harmonic at half amplitude.
MultichannelSignal gen_sim1(double fs, double duration, const NoiseSpec& noise);

/// Two linear chirps: sin(2 pi (20t + 10) t) + 0.5 sin(2 pi (20t + 20) t).
MultichannelSignal gen_sim2(double fs, double duration, const NoiseSpec& noise);

/// Two sinusoidally modulated tones around 10 Hz and 40 Hz (0.25 Hz modulator).
MultichannelSignal gen_sim3(double fs, double duration, const NoiseSpec& noise);

/// Stepped fundamental in both channels; second component at 2w (channel 1)
/// and 3w (channel 2); independent noise per channel.
MultichannelSignal gen_alignment_pair(double fs, double duration, const NoiseSpec& noise);

/// E epochs of C channels, all of length L.
struct EpochedRecording {
  Tensor<double, 3> epochs;  // E x C x L
  double sample_rate_hz = 1.0;
  std::vector<std::string> channel_names;

  std::size_t num_epochs() const noexcept { return epochs.extent(0); }
  std::size_t channels() const noexcept { return epochs.extent(1); }
  std::size_t length() const noexcept { return epochs.extent(2); }
};

EpochedRecording as_recording(const MultichannelSignal& signal, std::vector<std::string> names = {});

/// SSVEP-like single-channel recording: fundamental f switching from
/// `first_hz` to `second_hz` at mid-duration, plus its second harmonic at
/// half amplitude; each epoch gets independent noise (seed advances per
/// epoch).
EpochedRecording gen_ssvep_surrogate(double fs, double duration, const NoiseSpec& noise,
                                     std::size_t epochs = 6, double first_hz = 10.0,
                                     double second_hz = 13.0);

/// Recording CSV:
///   # sample_rate_hz=<float>
///   # channels=<name>,<name>,...
///   # epoch_len=<int>
///   one row per sample; columns epoch-major (e0c0, e0c1, ..., e1c0, ...)
EpochedRecording parse_csv_recording(std::istream& in);
EpochedRecording load_csv_recording(const std::string& path);
void write_csv_recording(std::ostream& out, const EpochedRecording& recording);
void save_csv_recording(const std::string& path, const EpochedRecording& recording);

MultichannelSignal average_epochs(const EpochedRecording& recording);

/// Per-channel zero mean, unit (population) variance.
MultichannelSignal zscore_channels(const MultichannelSignal& signal);

/// Zeroes every half-spectrum bin whose frequency (m * fs / L) lies outside
/// [lo_hz, hi_hz].
void apply_band_mask(std::vector<std::complex<double>>& half_spectrum, std::size_t length,
                     double fs, double lo_hz, double hi_hz);

MultichannelSignal brickwall_bandpass(const MultichannelSignal& signal, double lo_hz, double hi_hz);

/// Epoch average, z-score, then brickwall bandpass.
MultichannelSignal preprocess_ssvep(const EpochedRecording& recording, double band_lo_hz,
                                    double band_hi_hz);

/// Removes the spectral trend from a T x B time-frequency map: the
/// time-averaged spectrum smoothed by a centered 5-point moving average
/// (fewer points at the edges) is subtracted from every row.
Tensor<double, 2> detrend_tf_map(const Tensor<double, 2>& tf_map);

}  // namespace stvmd
