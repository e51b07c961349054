#include "setconv/episodic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace setconv {

namespace {

struct QueryAndSupport {
  std::size_t query = 0;
  std::vector<std::size_t> support;
};

/// Reserve the query row first, then draw the support from the remainder.
/// If the class cannot cover its support share with distinct rows, the
/// support is drawn with replacement from the non-query rows so the episode
/// composition stays exact.
QueryAndSupport draw_class(const std::vector<std::size_t>& rows, std::size_t want,
                           Rng& rng) {
  QueryAndSupport out;
  const std::size_t n = rows.size();
  if (n <= want) {
    out.query = rows[rng.below(n)];
    out.support.reserve(want);
    for (std::size_t i = 0; i < want; ++i) {
      std::size_t r;
      do {
        r = rows[rng.below(n)];
      } while (r == out.query && n > 1);
      out.support.push_back(r);
    }
    return out;
  }
  auto picked = rng.sample_distinct(n, want + 1);
  out.query = rows[picked[want]];
  out.support.reserve(want);
  for (std::size_t i = 0; i < want; ++i) out.support.push_back(rows[picked[i]]);
  return out;
}

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

void validate(const TrainConfig& config) {
  if (config.support_size < 2)
    throw InvalidArgument("TrainConfig: support_size must be >= 2");
  if (!(config.learning_rate > 0.0 && config.learning_rate < 1.0))
    throw InvalidArgument("TrainConfig: learning_rate must be in (0,1)");
  if (!(config.adam_beta1 > 0.0 && config.adam_beta1 < 1.0) ||
      !(config.adam_beta2 > 0.0 && config.adam_beta2 < 1.0))
    throw InvalidArgument("TrainConfig: Adam betas must be in (0,1)");
  if (!(config.adam_epsilon > 0.0))
    throw InvalidArgument("TrainConfig: adam_epsilon must be positive");
  if (config.hidden_dim == 0 || config.output_dim == 0)
    throw InvalidArgument("TrainConfig: dimensions must be positive");
}

AdamState make_adam_state(const SetConvParams& params) {
  AdamState state;
  state.first_moment = zero_grads(params);
  state.second_moment = zero_grads(params);
  state.step = 0;
  return state;
}

std::pair<std::size_t, std::size_t> split_support(std::size_t support_size,
                                                  std::size_t n_majority,
                                                  std::size_t n_minority) {
  if (support_size < 2)
    throw InvalidArgument("split_support: support_size must be >= 2");
  if (n_majority == 0 || n_minority == 0)
    throw InvalidArgument("split_support: class counts must be positive");
  const double share = static_cast<double>(support_size) *
                       static_cast<double>(n_minority) /
                       static_cast<double>(n_minority + n_majority);
  auto n2 = static_cast<std::size_t>(std::llround(share));
  n2 = std::clamp<std::size_t>(n2, 1, support_size - 1);
  return {support_size - n2, n2};
}

Episode sample_episode(const Dataset& data, const TrainConfig& config, Rng& rng) {
  validate(config);
  const BinaryRoles roles = binary_roles(data);
  const std::size_t n_maj = data.class_counts[roles.majority_id];
  const std::size_t n_min = data.class_counts[roles.minority_id];
  if (n_maj < 2 || n_min < 2)
    throw DataError("sample_episode: each class needs at least 2 samples (" +
                    std::to_string(n_maj) + " majority, " + std::to_string(n_min) +
                    " minority)");

  const auto [n1, n2] = split_support(config.support_size, n_maj, n_min);
  const auto maj_rows = data.indices_of_class(roles.majority_id);
  const auto min_rows = data.indices_of_class(roles.minority_id);

  const QueryAndSupport maj = draw_class(maj_rows, n1, rng);
  const QueryAndSupport min = draw_class(min_rows, n2, rng);

  Episode episode;
  episode.support_majority = take_rows(data.features, maj.support);
  episode.support_minority = take_rows(data.features, min.support);
  episode.query_majority = row_vector(data.features, maj.query);
  episode.query_minority = row_vector(data.features, min.query);
  return episode;
}

double episode_loss(const Vector& rep_majority, const Vector& rep_minority,
                    const Vector& query_majority, const Vector& query_minority) {
  const double z_mm = dot(query_majority, rep_majority);
  const double z_mn = dot(query_majority, rep_minority);
  const double z_nm = dot(query_minority, rep_majority);
  const double z_nn = dot(query_minority, rep_minority);
  const double term_maj = logsumexp2(z_mm, z_mn) - z_mm;
  const double term_min = logsumexp2(z_nm, z_nn) - z_nn;
  return 0.5 * (term_maj + term_min);
}

EpisodeLossGrads episode_loss_with_grads(const Vector& rep_majority,
                                         const Vector& rep_minority,
                                         const Vector& query_majority,
                                         const Vector& query_minority) {
  const std::size_t d = rep_majority.size();
  EpisodeLossGrads out;
  out.rep_majority.assign(d, 0.0);
  out.rep_minority.assign(d, 0.0);
  out.query_majority.assign(d, 0.0);
  out.query_minority.assign(d, 0.0);
  out.loss = episode_loss(rep_majority, rep_minority, query_majority, query_minority);

  // One query against both representatives; half weight per query.
  const auto add_query = [&](const Vector& query, bool true_is_majority,
                             Vector& d_query) {
    const double z_maj = dot(query, rep_majority);
    const double z_min = dot(query, rep_minority);
    const double lse = logsumexp2(z_maj, z_min);
    const double p_maj = std::exp(z_maj - lse);
    const double p_min = std::exp(z_min - lse);
    const double g_maj = 0.5 * (p_maj - (true_is_majority ? 1.0 : 0.0));
    const double g_min = 0.5 * (p_min - (true_is_majority ? 0.0 : 1.0));
    for (std::size_t i = 0; i < d; ++i) {
      d_query[i] += g_maj * rep_majority[i] + g_min * rep_minority[i];
      out.rep_majority[i] += g_maj * query[i];
      out.rep_minority[i] += g_min * query[i];
    }
  };
  add_query(query_majority, true, out.query_majority);
  add_query(query_minority, false, out.query_minority);
  return out;
}

void adam_step(SetConvParams& params, const SetConvGrads& grads, AdamState& state,
               const TrainConfig& config) {
  const auto p = param_arrays(params);
  const auto g = grad_arrays(grads);
  const auto m = grad_arrays(state.first_moment);
  const auto v = grad_arrays(state.second_moment);
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p[a].size() != g[a].size() || p[a].size() != m[a].size())
      throw DimensionError("adam_step: buffer shapes do not match parameters");

  state.step += 1;
  const double b1 = config.adam_beta1;
  const double b2 = config.adam_beta2;
  const double m_corr = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double v_corr = 1.0 - std::pow(b2, static_cast<double>(state.step));
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t i = 0; i < p[a].size(); ++i) {
      m[a][i] = b1 * m[a][i] + (1.0 - b1) * g[a][i];
      v[a][i] = b2 * v[a][i] + (1.0 - b2) * g[a][i] * g[a][i];
      const double m_hat = m[a][i] / m_corr;
      const double v_hat = v[a][i] / v_corr;
      p[a][i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
    }
  }
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  validate(config);
  const BinaryRoles roles = binary_roles(data);

  Rng rng(config.seed);
  TrainResult result;
  result.params = init_params(data.dim(), config.output_dim, config.hidden_dim, rng);

  // Fixed anchor from the full minority class, optionally capped by a
  // uniform subsample.
  const Matrix minority = data.rows_of_class(roles.minority_id);
  if (config.anchor_cap > 0 && minority.rows() > config.anchor_cap) {
    const auto keep = rng.sample_distinct(minority.rows(), config.anchor_cap);
    result.anchor = compute_anchor(take_rows(minority, keep));
  } else {
    result.anchor = compute_anchor(minority);
  }

  AdamState adam = make_adam_state(result.params);
  result.loss_log.reserve(config.iterations);
  for (std::size_t it = 0; it < config.iterations; ++it) {
    const Episode episode = sample_episode(data, config, rng);

    const Vector rep_maj =
        setconv_forward(episode.support_majority, result.params, result.anchor);
    const Vector rep_min =
        setconv_forward(episode.support_minority, result.params, result.anchor);
    const Vector emb_q_maj = setconv_forward(from_row(episode.query_majority),
                                             result.params, result.anchor);
    const Vector emb_q_min = setconv_forward(from_row(episode.query_minority),
                                             result.params, result.anchor);

    const EpisodeLossGrads loss =
        episode_loss_with_grads(rep_maj, rep_min, emb_q_maj, emb_q_min);
    if (!std::isfinite(loss.loss))
      throw Error("train: non-finite loss at iteration " + std::to_string(it));

    SetConvGrads grads = setconv_backward(episode.support_majority, result.params,
                                          result.anchor, loss.rep_majority);
    accumulate(grads, setconv_backward(episode.support_minority, result.params,
                                       result.anchor, loss.rep_minority));
    accumulate(grads, setconv_backward(from_row(episode.query_majority), result.params,
                                       result.anchor, loss.query_majority));
    accumulate(grads, setconv_backward(from_row(episode.query_minority), result.params,
                                       result.anchor, loss.query_minority));

    adam_step(result.params, grads, adam, config);
    result.loss_log.push_back({it, loss.loss});
  }
  return result;
}

}  // namespace setconv
