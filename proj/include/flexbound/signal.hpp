#pragma once

#include <string>
#include <vector>

#include "flexbound/types.hpp"

namespace flexbound {

/// Complex spectrum of a real signal; coefficient k and n-k are conjugates.
using Spectrum = CVec;

/// Direct O(n^2) transform from the definition
/// X[k] = sum_t x[t] * exp(-2*pi*i*k*t/n). Serves as the oracle for fft.
Spectrum dft_brute(const Vec& x);

/// Radix-2 iterative transform; length must be a power of two.
Spectrum fft(const Vec& x);

/// Magnitude frames of Hann-windowed segments: one row per window position,
/// one column per frequency bin (window_size/2 + 1 bins).
struct Spectrogram {
  Mat frames;
  Index window_size = 0;
  Index hop = 0;

  [[nodiscard]] Index n_frames() const { return frames.rows(); }
  [[nodiscard]] Index n_bins() const { return frames.cols(); }
};

Spectrogram stft(const Vec& x, Index window_size, Index hop);

/// Orthonormal Haar pyramid: details[0] is the finest level; coefficient
/// count always equals the input length.
struct WaveletDecomposition {
  Vec approximation;
  std::vector<Vec> details;
  int levels = 0;
};

WaveletDecomposition haar_forward(const Vec& x, int levels);
Vec haar_inverse(const WaveletDecomposition& w);

enum class Domain { time, frequency, time_frequency };

Domain parse_domain(const std::string& name);
std::string to_string(Domain d);

struct FeatureParams {
  Index window_size = 8;
  Index hop = 4;
};

/// Feature vector for one fully observed row. time: identity copy.
/// frequency: magnitudes of the first m/2+1 fft bins after zero-padding to
/// m = next power of two. time-frequency: flattened spectrogram magnitudes,
/// frame by frame.
Vec extract_features(const Vec& row, Domain domain, const FeatureParams& params = {});

/// Output length of extract_features as a pure function of (n, domain, params).
Index feature_length(Index n, Domain domain, const FeatureParams& params = {});

}  // namespace flexbound
