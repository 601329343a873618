#pragma once

#include <cmath>

namespace fwlab {

// Uniform collocation grid on the periodic box [-L/2, L/2).
//
// Collocation points are x_i = -L/2 + i*h with h = L/N. Frequencies are
// xi_k = 2*pi*k/L for k = -N/2 .. N/2-1, stored in FFT slot order:
// slot < N/2 holds k = slot, slot >= N/2 holds k = slot - N. The single
// unpaired mode k = -N/2 lives in slot N/2.
class PeriodicGrid {
 public:
  // Throws ConfigError unless L > 0 and N is a power of two >= 8.
  static PeriodicGrid make(double length, int size);

  double length() const { return length_; }
  int size() const { return size_; }
  double spacing() const { return spacing_; }

  double point(int i) const { return -0.5 * length_ + spacing_ * i; }

  int mode(int slot) const { return slot < size_ / 2 ? slot : slot - size_; }
  double freq(int slot) const { return freq_spacing_ * mode(slot); }
  double freq_spacing() const { return freq_spacing_; }

  // Largest frequency magnitude on the grid, pi*N/L (the Nyquist mode).
  double max_freq() const { return freq_spacing_ * (size_ / 2); }
  // Two-thirds-rule cutoff: modes with |xi| above this are dropped by dealias.
  double retained_max_freq() const { return (2.0 / 3.0) * max_freq(); }
  int nyquist_slot() const { return size_ / 2; }

  // Wraps x into [-L/2, L/2).
  double wrap(double x) const {
    double y = std::fmod(x + 0.5 * length_, length_);
    if (y < 0) y += length_;
    return y - 0.5 * length_;
  }

  bool operator==(const PeriodicGrid& o) const {
    return length_ == o.length_ && size_ == o.size_;
  }
  bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }

 private:
  PeriodicGrid(double length, int size)
      : length_(length),
        size_(size),
        spacing_(length / size),
        freq_spacing_(2.0 * M_PI / length) {}

  double length_;
  int size_;
  double spacing_;
  double freq_spacing_;
};

}  // namespace fwlab
