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

#include "nofmcl/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nofmcl/core/error.h"
#include "nofmcl/core/rng.h"
#include "nofmcl/field/checkpoint.h"
#include "nofmcl/io/container.h"

namespace nofmcl::train {

using nlohmann::json;

void TrainConfig::Validate() const {
  field.Validate();
  if (batch_size < 1) throw InputError("train: batch_size must be >= 1");
  if (epochs < 0) throw InputError("train: epochs must be >= 0");
  if (!(learning_rate > 0.0)) throw InputError("train: learning_rate must be > 0");
  if (!(lr_decay_factor > 0.0 && lr_decay_factor < 1.0)) {
    throw InputError("train: lr_decay_factor must be in (0, 1)");
  }
  if (!(weight_decay >= 0.0)) throw InputError("train: weight_decay must be >= 0");
  if (!(lambda_reg >= 0.0)) throw InputError("train: lambda_reg must be >= 0");
  if (samples_per_ray < 1) throw InputError("train: samples_per_ray must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0)) {
    throw InputError("train: bad Adam hyperparameters");
  }
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw InputError("train: holdout_fraction must be in [0, 1)");
  }
}

double learning_rate_at(const TrainConfig& config, int epoch) {
  double lr = config.learning_rate;
  for (int e : config.lr_decay_epochs) {
    if (epoch >= e) lr *= config.lr_decay_factor;
  }
  return lr;
}

template <typename Scalar>
AdamW<Scalar>::AdamW(const field::FieldTensors<Scalar>& like,
                     const TrainConfig& config)
    : beta1_(config.adam_beta1),
      beta2_(config.adam_beta2),
      eps_(config.adam_eps),
      weight_decay_(config.weight_decay),
      m_(field::FieldTensors<Scalar>::ZerosLike(like)),
      v_(field::FieldTensors<Scalar>::ZerosLike(like)) {}

template <typename Scalar>
void AdamW<Scalar>::Step(field::FieldTensors<Scalar>& params,
                         field::FieldTensors<Scalar>& gradients,
                         double learning_rate) {
  ++steps_;
  const double c1 = 1.0 - std::pow(beta1_, steps_);
  const double c2 = 1.0 - std::pow(beta2_, steps_);
  const auto p = params.refs();
  const auto g = gradients.refs();
  const auto m = m_.refs();
  const auto v = v_.refs();
  for (std::size_t t = 0; t < p.size(); ++t) {
    const bool decay = field::IsDecayed(p[t].kind) && weight_decay_ > 0.0;
    const Scalar shrink = static_cast<Scalar>(1.0 - learning_rate * weight_decay_);
    const Scalar b1 = static_cast<Scalar>(beta1_);
    const Scalar b2 = static_cast<Scalar>(beta2_);
    const Scalar step = static_cast<Scalar>(learning_rate / c1);
    const Scalar inv_c2 = static_cast<Scalar>(1.0 / c2);
    const Scalar eps = static_cast<Scalar>(eps_);
    for (std::size_t i = 0; i < p[t].size; ++i) {
      const Scalar gi = g[t].data[i];
      Scalar& mi = m[t].data[i];
      Scalar& vi = v[t].data[i];
      mi = b1 * mi + (1 - b1) * gi;
      vi = b2 * vi + (1 - b2) * gi * gi;
      Scalar& w = p[t].data[i];
      if (decay) w *= shrink;
      w -= step * mi / (std::sqrt(vi * inv_c2) + eps);
    }
  }
}

template class AdamW<float>;
template class AdamW<double>;

double validation_mae(const field::FieldModel& model, const io::ScanLog& log,
                      const render::RaySampling& sampling) {
  const render::FieldSource source(model);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : log.frames) {
    if (!f.pose) throw InputError("validation: frame without a pose");
    const auto rendered = render::render_scan(source, *f.pose, log.params, sampling);
    for (std::size_t i = 0; i < f.ranges.size(); ++i) {
      if (!HasReturn(f.ranges[i])) continue;
      sum += std::abs(rendered.frame.ranges[i] - f.ranges[i]);
      ++n;
    }
  }
  return n > 0 ? sum / n : 0.0;
}

namespace {

TrainResult Train(std::vector<TrainSample> pool,
                  const render::RaySampling& sampling, const TrainConfig& config,
                  const io::ScanLog* held_out, const EpochCallback& on_epoch) {
  config.Validate();
  sampling.Validate();
  if (pool.empty()) throw InputError("train: no beams to train on");
  if (std::none_of(pool.begin(), pool.end(),
                   [](const TrainSample& s) { return s.valid; })) {
    throw InputError("train: every beam is a no-return");
  }
  using Clock = std::chrono::steady_clock;

  TrainResult result{field::FieldModel(config.field, config.rng_seed), {}};
  result.report.pool_rays = pool.size();
  auto& model = result.model;
  AdamW<float> optimizer(model.params(), config);
  field::FieldTensors<float> grads;
  Rng rng(config.rng_seed ^ 0x5eed5eedULL);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto start = Clock::now();
    const double lr = learning_rate_at(config, epoch);
    rng.shuffle(pool.begin(), pool.end());
    double geo_sum = 0.0, reg_sum = 0.0;
    int steps = 0;
    for (std::size_t first = 0; first < pool.size(); first += config.batch_size) {
      const std::size_t last = std::min(pool.size(), first + config.batch_size);
      const std::span<const TrainSample> batch_view(pool.data() + first,
                                                    last - first);
      const BatchLoss loss =
          batch_loss(model, batch_view, sampling, config.lambda_reg, &grads);
      if (!std::isfinite(loss.total)) {
        throw NumericError("train: non-finite loss at epoch " +
                           std::to_string(epoch) + " batch " +
                           std::to_string(steps));
      }
      optimizer.Step(model.params(), grads, lr);
      geo_sum += loss.geometric;
      reg_sum += loss.regularizer;
      ++steps;
    }
    model.ClearCache();
    model.CheckFinite();

    EpochRecord record;
    record.epoch = epoch;
    record.geometric = geo_sum / std::max(steps, 1);
    record.regularizer = reg_sum / std::max(steps, 1);
    record.learning_rate = lr;
    if (held_out != nullptr && !held_out->frames.empty() &&
        (config.validate_every_epoch || epoch + 1 == config.epochs)) {
      record.validation_mae = validation_mae(model, *held_out, sampling);
    }
    record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.report.epochs.push_back(record);
    if (on_epoch) on_epoch(record);
  }
  if (held_out != nullptr && !held_out->frames.empty()) {
    result.report.validation_mae =
        result.report.epochs.empty()
            ? validation_mae(model, *held_out, sampling)
            : *result.report.epochs.back().validation_mae;
  }
  return result;
}

}  // namespace

TrainResult fit(const io::ScanLog& log, const TrainConfig& config,
                const EpochCallback& on_epoch) {
  config.Validate();
  if (log.frames.empty()) throw InputError("train: empty scan log");
  if (!log.all_posed()) throw InputError("train: every frame needs a pose");
  const auto split = io::SplitTail(log, config.holdout_fraction);
  std::vector<TrainSample> pool;
  for (const auto& f : split.train.frames) {
    AppendSamples(*f.pose, log.params, f.ranges, pool);
  }
  const auto sampling =
      render::RaySampling::ForLidar(log.params, config.samples_per_ray);
  TrainResult result = Train(std::move(pool), sampling, config,
                             &split.held_out, on_epoch);
  result.report.train_frames = split.train.frames.size();
  result.report.held_out_frames = split.held_out.frames.size();
  return result;
}

TrainResult fit_samples(std::vector<TrainSample> pool,
                        const render::RaySampling& sampling,
                        const TrainConfig& config, const EpochCallback& on_epoch) {
  return Train(std::move(pool), sampling, config, nullptr, on_epoch);
}

json TrainConfigToJson(const TrainConfig& c) {
  return {{"field", field::FieldConfigToJson(c.field)},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"lr_decay_epochs", c.lr_decay_epochs},
          {"lr_decay_factor", c.lr_decay_factor},
          {"weight_decay", c.weight_decay},
          {"lambda_reg", c.lambda_reg},
          {"samples_per_ray", c.samples_per_ray},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_eps", c.adam_eps},
          {"rng_seed", c.rng_seed},
          {"holdout_fraction", c.holdout_fraction},
          {"validate_every_epoch", c.validate_every_epoch}};
}

TrainConfig TrainConfigFromJson(const json& j) {
  const json defaults = TrainConfigToJson(TrainConfig{});
  for (const auto& [key, _] : j.items()) {
    if (!defaults.contains(key)) {
      throw InputError("train config: unknown key '" + key + "'");
    }
  }
  TrainConfig c;
  try {
    if (j.contains("field")) {
      json f = field::FieldConfigToJson(c.field);
      for (const auto& [key, value] : j.at("field").items()) {
        if (!f.contains(key)) {
          throw InputError("train config: unknown key 'field." + key + "'");
        }
        f[key] = value;
      }
      c.field = field::FieldConfigFromJson(f);
    }
    auto get = [&](const char* key, auto& out) {
      if (j.contains(key)) j.at(key).get_to(out);
    };
    get("batch_size", c.batch_size);
    get("epochs", c.epochs);
    get("learning_rate", c.learning_rate);
    get("lr_decay_epochs", c.lr_decay_epochs);
    get("lr_decay_factor", c.lr_decay_factor);
    get("weight_decay", c.weight_decay);
    get("lambda_reg", c.lambda_reg);
    get("samples_per_ray", c.samples_per_ray);
    get("adam_beta1", c.adam_beta1);
    get("adam_beta2", c.adam_beta2);
    get("adam_eps", c.adam_eps);
    get("rng_seed", c.rng_seed);
    get("holdout_fraction", c.holdout_fraction);
    get("validate_every_epoch", c.validate_every_epoch);
  } catch (const json::exception& e) {
    throw InputError(std::string("train config: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string SerializeTrainReport(const TrainReport& report) {
  std::string out;
  for (const auto& r : report.epochs) {
    json line = {{"epoch", r.epoch},
                 {"geo", r.geometric},
                 {"reg", r.regularizer},
                 {"lr", r.learning_rate},
                 {"seconds", r.seconds}};
    if (r.validation_mae) line["val_mae"] = *r.validation_mae;
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::vector<EpochRecord> ParseTrainReport(const std::string& text) {
  std::vector<EpochRecord> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      EpochRecord r;
      r.epoch = j.at("epoch").get<int>();
      r.geometric = j.at("geo").get<double>();
      r.regularizer = j.at("reg").get<double>();
      r.learning_rate = j.at("lr").get<double>();
      r.seconds = j.at("seconds").get<double>();
      if (j.contains("val_mae")) r.validation_mae = j.at("val_mae").get<double>();
      out.push_back(r);
    } catch (const json::exception& e) {
      throw InputError("train report: line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return out;
}

void WriteTrainReport(const TrainReport& report,
                      const std::filesystem::path& path) {
  io::WriteFileAtomic(path, SerializeTrainReport(report));
}

}  // namespace nofmcl::train
