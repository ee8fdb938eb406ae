#ifndef RCD_ARMA_HPP
#define RCD_ARMA_HPP

#include <cstddef>
#include <vector>

namespace rcd {

/// One ARMA(p,q) filter with an input gain.
///
/// Coefficient convention used throughout the library:
///
///   y(k) = sum_{j=1..p} ar[j-1] * y(k-j)
///        + gain * ( x(k) + sum_{j=1..q} ma[j-1] * x(k-j) ),
///
/// with x(k) = 0 for k < 0. That is, `ar` multiplies past *outputs* with a
/// plus sign and `ma` multiplies past *inputs* with a plus sign. The transfer
/// function is gain * (1 + sum ma[j] z^-j) / (1 - sum ar[j] z^-j).
///
/// `gain` is the scale applied to the whole input path: the signal amplitude
/// for deterministic signal models, the noise scale sigma for noise models.
struct ArmaModel {
  std::vector<double> ar;
  std::vector<double> ma;
  double gain = 1.0;

  int p() const { return static_cast<int>(ar.size()); }
  int q() const { return static_cast<int>(ma.size()); }

  /// Throws ArgumentError if gain == 0 or any coefficient is non-finite.
  void validate() const;
};

/// Rolling filter state: the last p outputs and last q inputs, newest first.
/// Size is fixed by the model orders and never grows with time.
class FilterMemory {
 public:
  FilterMemory() = default;
  explicit FilterMemory(const ArmaModel& model);

  const std::vector<double>& past_outputs() const { return past_y_; }
  const std::vector<double>& past_inputs() const { return past_x_; }

  void push_output(double y);
  void push_input(double x);
  void reset();

 private:
  std::vector<double> past_y_;
  std::vector<double> past_x_;
};

/// Advances the filter one step: consumes x(k), returns y(k).
/// Throws NumericError on a non-finite input sample.
double filter_step(const ArmaModel& model, FilterMemory& memory, double input);

/// A finite stretch of one agent's scalar signal.
struct SignalTrace {
  std::vector<double> samples;
  int agent_id = 0;
};

/// Response of the filter to the unit impulse, samples k = 0..length-1.
/// Throws ArgumentError if length < 1.
SignalTrace impulse_response(const ArmaModel& model, int length);

}  // namespace rcd

#endif  // RCD_ARMA_HPP
