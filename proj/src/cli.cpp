#include "rgshock/cli.hpp"

#include <stdexcept>

namespace rgs {

ModelSpec RunConfig::make_model() const {
  throw std::logic_error("RunConfig::make_model: not implemented yet");
}
void RunConfig::apply_kv(const KvConfig&) {}
KvConfig RunConfig::to_kv() const { return {}; }

int cmd_verify(const RunConfig&) { return 1; }
int cmd_profile(const RunConfig&) { return 1; }
int cmd_evans(const RunConfig&) { return 1; }
int cmd_simulate(const RunConfig&) { return 1; }
int run_cli(int, const char* const*) { return 1; }

}  // namespace rgs
