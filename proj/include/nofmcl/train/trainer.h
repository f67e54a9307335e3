/*
 * Copyright 2026 The nofmcl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef NOFMCL_TRAIN_TRAINER_H_
#define NOFMCL_TRAIN_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nofmcl/field/field_model.h"
#include "nofmcl/io/scan_log.h"
#include "nofmcl/train/loss.h"

namespace nofmcl::train {

struct TrainConfig {
  field::FieldConfig field;
  int batch_size = 1024;  // rays per step
  int epochs = 32;
  double learning_rate = 1e-4;
  std::vector<int> lr_decay_epochs = {4, 8};
  double lr_decay_factor = 0.5;
  double weight_decay = 1e-3;
  double lambda_reg = 1e-5;
  int samples_per_ray = 256;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t rng_seed = 0;
  // Tail fraction of the log held out for validation.
  double holdout_fraction = 0.1;
  // Render the held-out frames after every epoch (otherwise only at the
  // end).
  bool validate_every_epoch = false;

  void Validate() const;
};

// learning_rate * factor^(number of decay epochs <= epoch).
double learning_rate_at(const TrainConfig& config, int epoch);

// Adam with decoupled weight decay on weights and head weights only.
template <typename Scalar>
class AdamW {
 public:
  AdamW(const field::FieldTensors<Scalar>& like, const TrainConfig& config);

  void Step(field::FieldTensors<Scalar>& params,
            field::FieldTensors<Scalar>& gradients, double learning_rate);
  int steps() const { return steps_; }

 private:
  double beta1_, beta2_, eps_, weight_decay_;
  field::FieldTensors<Scalar> m_;
  field::FieldTensors<Scalar> v_;
  int steps_ = 0;
};

struct EpochRecord {
  int epoch = 0;
  double geometric = 0.0;    // mean over steps
  double regularizer = 0.0;  // mean over steps
  double learning_rate = 0.0;
  double seconds = 0.0;
  std::optional<double> validation_mae;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  std::size_t train_frames = 0;
  std::size_t held_out_frames = 0;
  std::size_t pool_rays = 0;
  std::optional<double> validation_mae;
};

struct TrainResult {
  field::FieldModel model;
  TrainReport report;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains on the first (1 - holdout_fraction) of the frames. The ray pool
// holds every beam of every training frame; it is reshuffled each epoch
// and consumed in batches of batch_size rays. Throws InputError for an
// empty or unposed log and when no beam has a return; NumericError (with
// the epoch and batch index) on a non-finite loss.
TrainResult fit(const io::ScanLog& log, const TrainConfig& config,
                const EpochCallback& on_epoch = {});

// Same, on an explicit sample pool without a held-out set.
TrainResult fit_samples(std::vector<TrainSample> pool,
                        const render::RaySampling& sampling,
                        const TrainConfig& config,
                        const EpochCallback& on_epoch = {});

// Mean |rendered - true| over the beams with a true return.
double validation_mae(const field::FieldModel& model, const io::ScanLog& log,
                      const render::RaySampling& sampling);

nlohmann::json TrainConfigToJson(const TrainConfig& config);
// Unknown keys are rejected.
TrainConfig TrainConfigFromJson(const nlohmann::json& j);

// One JSON object per epoch.
std::string SerializeTrainReport(const TrainReport& report);
std::vector<EpochRecord> ParseTrainReport(const std::string& text);
void WriteTrainReport(const TrainReport& report,
                      const std::filesystem::path& path);

}  // namespace nofmcl::train

#endif  // NOFMCL_TRAIN_TRAINER_H_
