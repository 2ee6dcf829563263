// Copyright 2026 The afpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "afpc/nn/gan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "afpc/error.hpp"

namespace afpc::nn {

std::vector<LrPhase> TrainConfig::effective_schedule() const {
  if (!lr_schedule.empty()) return lr_schedule;
  const std::size_t half = (epochs + 1) / 2;
  return {{1, initial_rate}, {half + 1, final_rate}};
}

double TrainConfig::rate_for_epoch(std::size_t epoch) const {
  const auto schedule = effective_schedule();
  double rate = schedule.front().rate;
  for (const auto& phase : schedule)
    if (epoch >= phase.first_epoch) rate = phase.rate;
  return rate;
}

void TrainConfig::validate() const {
  require(batch_size >= 1, ErrorCode::InvalidArgument, "batch size must be >= 1");
  require(lambda_l1 >= 0.0, ErrorCode::InvalidArgument, "lambda must be >= 0");
  require(initial_rate > 0.0 && final_rate > 0.0, ErrorCode::InvalidArgument, "learning rates must be positive");
  for (const auto& p : lr_schedule)
    require(p.rate > 0.0 && p.first_epoch >= 1, ErrorCode::InvalidArgument, "bad learning-rate phase");
}

NormStats compute_norm_stats(const Matrix<float>& features) {
  NormStats s;
  s.mean.assign(features.cols, 0.0);
  s.stdev.assign(features.cols, 0.0);
  if (features.rows == 0) {
    std::fill(s.stdev.begin(), s.stdev.end(), 1.0);
    return s;
  }
  for (std::size_t r = 0; r < features.rows; ++r)
    for (std::size_t c = 0; c < features.cols; ++c) s.mean[c] += features(r, c);
  for (auto& m : s.mean) m /= static_cast<double>(features.rows);
  for (std::size_t r = 0; r < features.rows; ++r)
    for (std::size_t c = 0; c < features.cols; ++c) {
      const double d = features(r, c) - s.mean[c];
      s.stdev[c] += d * d;
    }
  for (auto& v : s.stdev) v = std::max(std::sqrt(v / static_cast<double>(features.rows)), kStdFloor);
  return s;
}

void apply_norm_stats(const NormStats& stats, Matrix<float>& features) {
  const std::size_t d = stats.mean.size();
  if (d == 0) return;
  if (features.cols % d != 0)
    fail(ErrorCode::DimensionMismatch, "features of width " + std::to_string(features.cols) +
                                           " are not a multiple of the statistics width " + std::to_string(d));
  for (std::size_t r = 0; r < features.rows; ++r) {
    auto row = features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      row[c] = static_cast<float>((row[c] - stats.mean[c % d]) / stats.stdev[c % d]);
  }
}

std::vector<std::size_t> generator_dims(const FeatureConfig& f, const StftConfig& s, const GanArchitecture& a) {
  std::vector<std::size_t> dims{context_dimension(f, s) + a.latent_dim};
  dims.insert(dims.end(), a.hidden.begin(), a.hidden.end());
  dims.push_back(s.bins());
  return dims;
}

std::vector<std::size_t> discriminator_dims(const FeatureConfig& f, const StftConfig& s, const GanArchitecture& a) {
  std::vector<std::size_t> dims{s.bins() + feature_dimension(f, s)};
  dims.insert(dims.end(), a.hidden.begin(), a.hidden.end());
  dims.push_back(1);
  return dims;
}

GanModel make_gan_model(const FeatureConfig& features, const StftConfig& stft, const GanArchitecture& arch,
                        const TrainConfig& train) {
  features.validate();
  stft.validate();
  train.validate();
  GanModel model;
  model.features = features;
  model.stft = stft;
  model.arch = arch;
  model.train = train;

  const std::size_t hidden = arch.hidden.size();
  std::vector<Activation> g_act(hidden, Activation::Relu), d_act(hidden, Activation::LeakyRelu);
  g_act.push_back(Activation::Sigmoid);
  d_act.push_back(Activation::Sigmoid);
  std::vector<double> g_drop(hidden, arch.dropout), d_drop(hidden, arch.discriminator_dropout ? arch.dropout : 0.0);
  g_drop.push_back(0.0);
  d_drop.push_back(0.0);

  std::seed_seq seq{train.seed, std::uint64_t{0x9e3779b97f4a7c15ull}};
  std::vector<std::uint64_t> seeds(3);
  seq.generate(seeds.begin(), seeds.end());
  model.generator = init_network<float>(generator_dims(features, stft, arch), g_act, seeds[0], g_drop);
  model.discriminator = init_network<float>(discriminator_dims(features, stft, arch), d_act, seeds[1], d_drop);
  model.generator_opt = make_adam_state(model.generator);
  model.discriminator_opt = make_adam_state(model.discriminator);
  model.rng.seed(seeds[2]);
  return model;
}

template <typename T>
Matrix<T> concat_columns(const Matrix<T>& left, const Matrix<T>& right) {
  require(left.rows == right.rows, ErrorCode::ShapeMismatch, "row counts differ in column concatenation");
  Matrix<T> out(left.rows, left.cols + right.cols);
  for (std::size_t r = 0; r < left.rows; ++r) {
    auto dst = out.row(r);
    std::copy(left.row(r).begin(), left.row(r).end(), dst.begin());
    std::copy(right.row(r).begin(), right.row(r).end(), dst.begin() + left.cols);
  }
  return out;
}

template <typename T>
DiscriminatorTerm<T> discriminator_term(const DenseNetwork<T>& d, const Matrix<T>& input, double target, Mode mode,
                                        Rng& rng) {
  DiscriminatorTerm<T> term;
  Tape<T> tape;
  term.output = forward(d, input, mode, rng, &tape);
  auto ls = least_squares_term(term.output, target);
  term.loss = ls.value;
  term.grads = backward(d, tape, ls.grad);
  return term;
}

template <typename T>
GeneratorPass<T> generator_pass(const DenseNetwork<T>& g, const Matrix<T>& g_input, Mode mode, Rng& rng) {
  GeneratorPass<T> pass;
  pass.irm_hat = forward(g, g_input, mode, rng, &pass.tape);
  return pass;
}

template <typename T>
GeneratorTerm<T> generator_term(const DenseNetwork<T>& g, const GeneratorPass<T>& pass, const DenseNetwork<T>& d,
                                const Matrix<T>& condition, const Matrix<T>& irm, double lambda_l1, Mode mode,
                                Rng& rng) {
  const std::size_t bins = pass.irm_hat.cols;
  Tape<T> d_tape;
  const Matrix<T> d_out = forward(d, concat_columns(pass.irm_hat, condition), mode, rng, &d_tape);
  const auto adv = least_squares_term(d_out, 1.0);
  const auto d_grads = backward(d, d_tape, adv.grad, {.parameters = false, .input = true});
  const auto l1 = l1_term(pass.irm_hat, irm, lambda_l1);

  Matrix<T> grad_irm(pass.irm_hat.rows, bins);
  for (std::size_t r = 0; r < grad_irm.rows; ++r)
    for (std::size_t c = 0; c < bins; ++c) grad_irm(r, c) = d_grads.input(r, c) + l1.grad(r, c);

  GeneratorTerm<T> term;
  term.adversarial = adv.value;
  term.l1 = l1.value;
  term.loss = adv.value + l1.value;
  term.grads = backward(g, pass.tape, grad_irm);
  return term;
}

Batch GanTrainer::make_batch(const TrainingSet& data, std::span<const std::size_t> rows) {
  const std::size_t latent = model_.arch.latent_dim;
  Batch b;
  b.generator_input = Matrix<float>(rows.size(), data.context.cols + latent);
  b.condition = Matrix<float>(rows.size(), data.current.cols);
  b.target = Matrix<float>(rows.size(), data.target.cols);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    auto gin = b.generator_input.row(i);
    std::copy(data.context.row(r).begin(), data.context.row(r).end(), gin.begin());
    for (std::size_t z = 0; z < latent; ++z) gin[data.context.cols + z] = static_cast<float>(gauss(model_.rng));
    std::copy(data.current.row(r).begin(), data.current.row(r).end(), b.condition.row(i).begin());
    std::copy(data.target.row(r).begin(), data.target.row(r).end(), b.target.row(i).begin());
  }
  return b;
}

double GanTrainer::discriminator_real_step(const Batch& batch, double rate) {
  auto term = discriminator_term(model_.discriminator, concat_columns(batch.target, batch.condition), 1.0,
                                 Mode::Train, model_.rng);
  adam_step(model_.discriminator, term.grads, model_.discriminator_opt, rate, model_.train.adam);
  return term.loss;
}

double GanTrainer::discriminator_fake_step(const Batch& batch, double rate) {
  pass_ = generator_pass(model_.generator, batch.generator_input, Mode::Train, model_.rng);
  have_pass_ = true;
  auto term = discriminator_term(model_.discriminator, concat_columns(pass_.irm_hat, batch.condition), 0.0,
                                 Mode::Train, model_.rng);
  adam_step(model_.discriminator, term.grads, model_.discriminator_opt, rate, model_.train.adam);
  return term.loss;
}

GeneratorTerm<float> GanTrainer::generator_step(const Batch& batch, double rate) {
  // G has not changed since the fake-discriminator step, so its taped pass is reused.
  if (!have_pass_) pass_ = generator_pass(model_.generator, batch.generator_input, Mode::Train, model_.rng);
  have_pass_ = false;
  auto term = generator_term(model_.generator, pass_, model_.discriminator, batch.condition, batch.target,
                             model_.train.lambda_l1, Mode::Train, model_.rng);
  adam_step(model_.generator, term.grads, model_.generator_opt, rate, model_.train.adam);
  return term;
}

BatchLosses GanTrainer::train_batch(const Batch& batch, double rate) {
  BatchLosses out;
  out.d_real = discriminator_real_step(batch, rate);
  out.d_fake = discriminator_fake_step(batch, rate);
  const auto g = generator_step(batch, rate);
  out.g_adversarial = g.adversarial;
  out.g_total = g.loss;
  out.l1 = g.l1;
  for (std::size_t i = 0; i < batch.target.size(); ++i)
    out.abs_error_sum += std::fabs(static_cast<double>(pass_.irm_hat.data[i]) - batch.target.data[i]);
  return out;
}

TrainingSet normalized_copy(const GanModel& model, const TrainingSet& data) {
  TrainingSet out = data;
  apply_norm_stats(model.norm, out.context);
  apply_norm_stats(model.norm, out.current);
  return out;
}

namespace {

void check_training_set(const GanModel& model, const TrainingSet& data) {
  if (data.frames() == 0) fail(ErrorCode::EmptyDataset, "training set has no frames");
  if (data.context.rows != data.frames() || data.current.rows != data.frames())
    fail(ErrorCode::CacheMismatch, "context, current and target caches disagree on frame count");
  if (data.context.cols != model.context_dim() || data.current.cols != model.feature_dim() ||
      data.target.cols != model.mask_dim())
    fail(ErrorCode::CacheMismatch, "cache dimensions (" + std::to_string(data.context.cols) + ", " +
                                       std::to_string(data.current.cols) + ", " + std::to_string(data.target.cols) +
                                       ") do not match the model (" + std::to_string(model.context_dim()) + ", " +
                                       std::to_string(model.feature_dim()) + ", " + std::to_string(model.mask_dim()) +
                                       ")");
}

}  // namespace

void train(GanModel& model, const TrainingSet& data, const EpochCallback& on_epoch) {
  model.train.validate();
  check_training_set(model, data);
  if (model.norm.empty()) {
    if (model.train.normalize_inputs) {
      model.norm = compute_norm_stats(data.current);
    } else {
      model.norm.mean.assign(model.feature_dim(), 0.0);
      model.norm.stdev.assign(model.feature_dim(), 1.0);
    }
  }
  if (model.epochs_done >= model.train.epochs) return;
  const TrainingSet norm = normalized_copy(model, data);

  GanTrainer trainer(model);
  std::vector<std::size_t> order(norm.frames());
  const std::size_t batch_size = model.train.batch_size;
  while (model.epochs_done < model.train.epochs) {
    const auto started = std::chrono::steady_clock::now();
    const std::size_t epoch = model.epochs_done + 1;
    const double rate = model.train.rate_for_epoch(epoch);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), model.rng);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.rate = rate;
    double abs_err = 0.0;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
      const std::size_t n = std::min(batch_size, order.size() - start);
      const Batch batch = trainer.make_batch(norm, std::span<const std::size_t>(order.data() + start, n));
      const BatchLosses l = trainer.train_batch(batch, rate);
      rec.loss_d_real += l.d_real;
      rec.loss_d_fake += l.d_fake;
      rec.loss_g_adversarial += l.g_adversarial;
      rec.loss_g += l.g_total;
      abs_err += l.abs_error_sum;
      ++rec.batches;
    }
    const double nb = static_cast<double>(rec.batches);
    rec.loss_d_real /= nb;
    rec.loss_d_fake /= nb;
    rec.loss_g_adversarial /= nb;
    rec.loss_g /= nb;
    rec.mean_abs_error = abs_err / (static_cast<double>(order.size()) * static_cast<double>(model.mask_dim()));
    model.history.push_back(rec);
    model.epochs_done = epoch;
    if (on_epoch) on_epoch(rec, std::chrono::steady_clock::now() - started);
  }
}

IrmSpectrogram infer_mask(const GanModel& model, const Matrix<float>& context, const ZPolicy& z) {
  if (context.cols != model.context_dim())
    fail(ErrorCode::DimensionMismatch, "model expects context features of dimension " +
                                           std::to_string(model.context_dim()) + ", found " +
                                           std::to_string(context.cols));
  Matrix<float> normed = context;
  apply_norm_stats(model.norm, normed);

  const std::size_t latent = model.arch.latent_dim;
  Rng rng(z.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix<float> input(context.rows, context.cols + latent);
  for (std::size_t r = 0; r < context.rows; ++r) {
    auto row = input.row(r);
    std::copy(normed.row(r).begin(), normed.row(r).end(), row.begin());
    for (std::size_t i = 0; i < latent; ++i)
      row[context.cols + i] = z.kind == ZPolicy::Kind::Zeros ? 0.0f : static_cast<float>(gauss(rng));
  }
  Rng unused(0);
  const Matrix<float> out = forward(model.generator, input, Mode::Eval, unused);
  IrmSpectrogram mask(out.rows, out.cols);
  for (std::size_t i = 0; i < out.size(); ++i) mask.data[i] = out.data[i];
  return mask;
}

#define AFPC_INSTANTIATE_GAN(T)                                                                                   \
  template Matrix<T> concat_columns<T>(const Matrix<T>&, const Matrix<T>&);                                       \
  template DiscriminatorTerm<T> discriminator_term<T>(const DenseNetwork<T>&, const Matrix<T>&, double, Mode,     \
                                                      Rng&);                                                      \
  template GeneratorPass<T> generator_pass<T>(const DenseNetwork<T>&, const Matrix<T>&, Mode, Rng&);              \
  template GeneratorTerm<T> generator_term<T>(const DenseNetwork<T>&, const GeneratorPass<T>&,                    \
                                              const DenseNetwork<T>&, const Matrix<T>&, const Matrix<T>&, double, \
                                              Mode, Rng&);

AFPC_INSTANTIATE_GAN(float)
AFPC_INSTANTIATE_GAN(double)

#undef AFPC_INSTANTIATE_GAN

}  // namespace afpc::nn
