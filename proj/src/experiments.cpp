#include "hdfe/experiments.hpp"

#include "hdfe/errors.hpp"

namespace hdfe {

std::vector<std::uint64_t> default_seeds(const std::string& name) {
  (void)name;
  return {1};
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  throw ValueError("run_experiment: not yet implemented: " + spec.name);
}

std::vector<std::filesystem::path> emit_plots(const ExperimentReport&,
                                              const std::filesystem::path&) {
  return {};
}

void write_report_json(const ExperimentReport&, const std::filesystem::path&) {}

ExperimentReport run_and_emit(const ExperimentSpec& spec,
                              const std::filesystem::path&) {
  return run_experiment(spec);
}

}  // namespace hdfe
