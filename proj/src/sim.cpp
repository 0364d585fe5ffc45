#include "rgshock/sim.hpp"

#include <stdexcept>

namespace rgs {

SimState make_profile_state(const Profile&, double, double) {
  throw std::logic_error("make_profile_state: not implemented yet");
}
void elliptic_solve(const ModelSpec&, SimState&) {
  throw std::logic_error("elliptic_solve: not implemented yet");
}
double elliptic_residual(const ModelSpec&, const SimState&) {
  throw std::logic_error("elliptic_residual: not implemented yet");
}
double max_wave_speed(const ModelSpec&, const SimState&) {
  throw std::logic_error("max_wave_speed: not implemented yet");
}
void hyperbolic_step(const ModelSpec&, SimState&, double, double) {
  throw std::logic_error("hyperbolic_step: not implemented yet");
}
ShockTrack track_shock_location(const SimState&, const Profile&, double) {
  throw std::logic_error("track_shock_location: not implemented yet");
}
PerturbKind perturb_kind_from_string(const std::string&) {
  throw std::logic_error("perturb_kind_from_string: not implemented yet");
}
SimSeries run_simulation(const Profile&, const SimRunOptions&) {
  throw std::logic_error("run_simulation: not implemented yet");
}
DecayReport measure_decay(const SimSeries&) {
  throw std::logic_error("measure_decay: not implemented yet");
}
EnergyReport energy_monitor(const SimSeries&) {
  throw std::logic_error("energy_monitor: not implemented yet");
}

}  // namespace rgs
