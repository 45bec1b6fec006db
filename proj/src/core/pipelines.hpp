#pragma once

#include "harness.hpp"

namespace mbl::pipelines {

PipelineResult spectrum(const ExperimentConfig& c, RunContext& ctx);
PipelineResult assumptions(const ExperimentConfig& c, RunContext& ctx);
PipelineResult lr_probe(const ExperimentConfig& c, RunContext& ctx);
PipelineResult filter_check(const ExperimentConfig& c, RunContext& ctx);
PipelineResult cluster_a(const ExperimentConfig& c, RunContext& ctx);
PipelineResult cluster_b(const ExperimentConfig& c, RunContext& ctx);
PipelineResult mps(const ExperimentConfig& c, RunContext& ctx);
PipelineResult liom(const ExperimentConfig& c, RunContext& ctx);
PipelineResult thermalize(const ExperimentConfig& c, RunContext& ctx);
PipelineResult fig1a(const ExperimentConfig& c, RunContext& ctx);
PipelineResult fig1b(const ExperimentConfig& c, RunContext& ctx);
PipelineResult fig1c(const ExperimentConfig& c, RunContext& ctx);

}  // namespace mbl::pipelines
