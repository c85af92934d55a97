#include "flexbound/signal.hpp"

#include <cmath>

#include "flexbound/errors.hpp"

namespace flexbound {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

bool is_pow2(Index n) { return n >= 1 && (n & (n - 1)) == 0; }

Index next_pow2(Index n) {
  Index m = 1;
  while (m < n) m <<= 1;
  return m;
}

// In-place iterative radix-2 decimation-in-time transform.
void fft_in_place(CVec& a) {
  const Index n = a.size();
  for (Index i = 1, j = 0; i < n; ++i) {
    Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (Index len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / static_cast<double>(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (Index i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (Index j = 0; j < len / 2; ++j) {
        const Complex u = a[i + j];
        const Complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void require_finite_row(const Vec& row, const char* op) {
  if (!row.allFinite()) {
    throw DataError(std::string(op) + ": row contains missing or non-finite values");
  }
}

}  // namespace

Spectrum dft_brute(const Vec& x) {
  const Index n = x.size();
  if (n < 1) throw DataError("dft_brute: empty input");
  require_finite_row(x, "dft_brute");
  Spectrum out(n);
  for (Index k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (Index t = 0; t < n; ++t) {
      const double ang = -kTwoPi * static_cast<double>(k) * static_cast<double>(t) /
                         static_cast<double>(n);
      acc += x[t] * Complex(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

Spectrum fft(const Vec& x) {
  const Index n = x.size();
  if (n < 1) throw DataError("fft: empty input");
  if (!is_pow2(n)) {
    throw DataError("fft: length must be a power of two, got " + std::to_string(n));
  }
  require_finite_row(x, "fft");
  CVec a(n);
  for (Index i = 0; i < n; ++i) a[i] = Complex(x[i], 0.0);
  fft_in_place(a);
  return a;
}

Spectrogram stft(const Vec& x, Index window_size, Index hop) {
  if (!is_pow2(window_size)) {
    throw ConfigError("stft: window_size must be a power of two, got " +
                      std::to_string(window_size));
  }
  if (hop < 1) throw ConfigError("stft: hop must be >= 1");
  if (window_size > x.size()) {
    throw DataError("stft: window (" + std::to_string(window_size) +
                    ") larger than signal (" + std::to_string(x.size()) + ")");
  }
  require_finite_row(x, "stft");

  Vec hann(window_size);
  for (Index t = 0; t < window_size; ++t) {
    hann[t] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(t) /
                                   static_cast<double>(window_size));
  }

  const Index n_frames = (x.size() - window_size) / hop + 1;
  const Index n_bins = window_size / 2 + 1;
  Spectrogram sg;
  sg.window_size = window_size;
  sg.hop = hop;
  sg.frames.resize(n_frames, n_bins);
  CVec seg(window_size);
  for (Index f = 0; f < n_frames; ++f) {
    const Index offset = f * hop;
    for (Index t = 0; t < window_size; ++t) {
      seg[t] = Complex(x[offset + t] * hann[t], 0.0);
    }
    fft_in_place(seg);
    for (Index k = 0; k < n_bins; ++k) sg.frames(f, k) = std::abs(seg[k]);
  }
  return sg;
}

WaveletDecomposition haar_forward(const Vec& x, int levels) {
  const Index n = x.size();
  if (!is_pow2(n)) {
    throw DataError("haar_forward: length must be a power of two, got " +
                    std::to_string(n));
  }
  int max_levels = 0;
  for (Index m = n; m > 1; m >>= 1) ++max_levels;
  if (levels < 1 || levels > max_levels) {
    throw DataError("haar_forward: levels must lie in [1, " +
                    std::to_string(max_levels) + "], got " + std::to_string(levels));
  }
  require_finite_row(x, "haar_forward");

  constexpr double inv_sqrt2 = 0.70710678118654752440084436210484904;
  WaveletDecomposition w;
  w.levels = levels;
  Vec cur = x;
  for (int l = 0; l < levels; ++l) {
    const Index half = cur.size() / 2;
    Vec approx(half);
    Vec detail(half);
    for (Index i = 0; i < half; ++i) {
      approx[i] = (cur[2 * i] + cur[2 * i + 1]) * inv_sqrt2;
      detail[i] = (cur[2 * i] - cur[2 * i + 1]) * inv_sqrt2;
    }
    w.details.push_back(std::move(detail));
    cur = std::move(approx);
  }
  w.approximation = std::move(cur);
  return w;
}

Vec haar_inverse(const WaveletDecomposition& w) {
  if (w.levels < 1 || static_cast<int>(w.details.size()) != w.levels) {
    throw DataError("haar_inverse: levels does not match detail count");
  }
  constexpr double inv_sqrt2 = 0.70710678118654752440084436210484904;
  Vec cur = w.approximation;
  for (int l = w.levels - 1; l >= 0; --l) {
    const Vec& detail = w.details[static_cast<std::size_t>(l)];
    if (detail.size() != cur.size()) {
      throw DataError("haar_inverse: detail level " + std::to_string(l) +
                      " has length " + std::to_string(detail.size()) +
                      ", expected " + std::to_string(cur.size()));
    }
    Vec next(cur.size() * 2);
    for (Index i = 0; i < cur.size(); ++i) {
      next[2 * i] = (cur[i] + detail[i]) * inv_sqrt2;
      next[2 * i + 1] = (cur[i] - detail[i]) * inv_sqrt2;
    }
    cur = std::move(next);
  }
  return cur;
}

Domain parse_domain(const std::string& name) {
  if (name == "time") return Domain::time;
  if (name == "frequency") return Domain::frequency;
  if (name == "time-frequency" || name == "time_frequency") return Domain::time_frequency;
  throw ConfigError("unknown transform domain '" + name +
                    "' (expected time, frequency or time-frequency)");
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::time: return "time";
    case Domain::frequency: return "frequency";
    case Domain::time_frequency: return "time-frequency";
  }
  return "?";
}

Vec extract_features(const Vec& row, Domain domain, const FeatureParams& params) {
  if (row.size() < 1) throw DataError("extract_features: empty row");
  require_finite_row(row, "extract_features");
  switch (domain) {
    case Domain::time:
      return row;
    case Domain::frequency: {
      const Index m = next_pow2(row.size());
      Vec padded = Vec::Zero(m);
      padded.head(row.size()) = row;
      const Spectrum spec = fft(padded);
      Vec out(m / 2 + 1);
      for (Index k = 0; k < out.size(); ++k) out[k] = std::abs(spec[k]);
      return out;
    }
    case Domain::time_frequency: {
      const Spectrogram sg = stft(row, params.window_size, params.hop);
      Vec out(sg.n_frames() * sg.n_bins());
      for (Index f = 0; f < sg.n_frames(); ++f) {
        for (Index k = 0; k < sg.n_bins(); ++k) {
          out[f * sg.n_bins() + k] = sg.frames(f, k);
        }
      }
      return out;
    }
  }
  throw ConfigError("extract_features: unknown domain");
}

Index feature_length(Index n, Domain domain, const FeatureParams& params) {
  if (n < 1) throw DataError("feature_length: empty row");
  switch (domain) {
    case Domain::time:
      return n;
    case Domain::frequency:
      return next_pow2(n) / 2 + 1;
    case Domain::time_frequency: {
      if (!is_pow2(params.window_size)) {
        throw ConfigError("feature_length: window_size must be a power of two");
      }
      if (params.hop < 1) throw ConfigError("feature_length: hop must be >= 1");
      if (params.window_size > n) {
        throw DataError("feature_length: window larger than row");
      }
      const Index frames = (n - params.window_size) / params.hop + 1;
      return frames * (params.window_size / 2 + 1);
    }
  }
  throw ConfigError("feature_length: unknown domain");
}

}  // namespace flexbound
