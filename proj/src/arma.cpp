#include "rcd/arma.hpp"

#include <cmath>

#include "rcd/errors.hpp"

namespace rcd {

namespace {

void push_front(std::vector<double>& ring, double value) {
  if (ring.empty()) return;
  for (std::size_t i = ring.size() - 1; i > 0; --i) ring[i] = ring[i - 1];
  ring[0] = value;
}

}  // namespace

void ArmaModel::validate() const {
  if (gain == 0.0 || !std::isfinite(gain))
    throw ArgumentError("ArmaModel: gain must be finite and nonzero");
  for (double c : ar)
    if (!std::isfinite(c)) throw ArgumentError("ArmaModel: non-finite AR coefficient");
  for (double c : ma)
    if (!std::isfinite(c)) throw ArgumentError("ArmaModel: non-finite MA coefficient");
}

FilterMemory::FilterMemory(const ArmaModel& model)
    : past_y_(model.ar.size(), 0.0), past_x_(model.ma.size(), 0.0) {}

void FilterMemory::push_output(double y) { push_front(past_y_, y); }

void FilterMemory::push_input(double x) { push_front(past_x_, x); }

void FilterMemory::reset() {
  past_y_.assign(past_y_.size(), 0.0);
  past_x_.assign(past_x_.size(), 0.0);
}

double filter_step(const ArmaModel& model, FilterMemory& memory, double input) {
  if (!std::isfinite(input))
    throw NumericError("filter_step: non-finite input sample");

  double moving_average = input;
  const auto& past_x = memory.past_inputs();
  for (std::size_t j = 0; j < model.ma.size(); ++j)
    moving_average += model.ma[j] * past_x[j];

  double y = model.gain * moving_average;
  const auto& past_y = memory.past_outputs();
  for (std::size_t j = 0; j < model.ar.size(); ++j)
    y += model.ar[j] * past_y[j];

  memory.push_input(input);
  memory.push_output(y);
  return y;
}

SignalTrace impulse_response(const ArmaModel& model, int length) {
  if (length < 1) throw ArgumentError("impulse_response: length must be >= 1");
  model.validate();

  SignalTrace trace;
  trace.samples.resize(static_cast<std::size_t>(length));
  FilterMemory memory(model);
  for (int k = 0; k < length; ++k)
    trace.samples[static_cast<std::size_t>(k)] =
        filter_step(model, memory, k == 0 ? 1.0 : 0.0);
  return trace;
}

}  // namespace rcd
