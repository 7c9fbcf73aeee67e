#include "lvsie/nn/encoder.hpp"

#include <random>

namespace lvsie::nn {

nlohmann::json to_json(const TinyEncoderConfig& c) {
  return {{"vocab_buckets", c.vocab_buckets},
          {"embed_dim", c.embed_dim},
          {"hidden_dim", c.hidden_dim},
          {"layers", c.layers},
          {"init_scale", c.init_scale}};
}

TinyEncoderConfig tiny_encoder_config_from_json(const nlohmann::json& j) {
  TinyEncoderConfig c;
  c.vocab_buckets = j.value("vocab_buckets", c.vocab_buckets);
  c.embed_dim = j.value("embed_dim", c.embed_dim);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.layers = j.value("layers", c.layers);
  c.init_scale = j.value("init_scale", c.init_scale);
  return c;
}

TinyEncoder::TinyEncoder(TinyEncoderConfig config, std::uint64_t seed) : config_(config) {
  if (config_.vocab_buckets == 0 || config_.embed_dim == 0 || config_.hidden_dim == 0 ||
      config_.layers == 0)
    throw Error("tiny encoder dimensions must be positive");
  std::mt19937_64 rng(seed);
  const double s = config_.init_scale;
  embedding_ = Parameter("encoder.embedding",
                         uniform_init(config_.vocab_buckets, config_.embed_dim, s, rng));
  std::size_t in = config_.embed_dim;
  const std::size_t h = config_.hidden_dim;
  for (std::size_t l = 0; l < config_.layers; ++l) {
    const std::string base = "encoder.layer" + std::to_string(l);
    auto make = [&](const std::string& name) {
      return Direction{Parameter(name + ".input", uniform_init(in, h, s, rng)),
                       Parameter(name + ".recurrent", uniform_init(h, h, s, rng)),
                       Parameter(name + ".bias", Matrix::Zero(1, h))};
    };
    layers_.push_back({make(base + ".fwd"), make(base + ".bwd")});
    in = 2 * h;
  }
}

std::string TinyEncoder::identifier() const {
  return "tiny-birnn-e" + std::to_string(config_.embed_dim) + "-h" +
         std::to_string(config_.hidden_dim) + "-l" + std::to_string(config_.layers);
}

std::vector<Parameter*> TinyEncoder::parameters() {
  std::vector<Parameter*> out{&embedding_};
  for (auto& l : layers_)
    for (Direction* d : {&l.forward, &l.backward}) {
      out.push_back(&d->input);
      out.push_back(&d->recurrent);
      out.push_back(&d->bias);
    }
  return out;
}

std::size_t TinyEncoder::bucket(const std::string& word) const {
  // FNV-1a.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : word) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h % config_.vocab_buckets);
}

Var TinyEncoder::run_direction(Tape& tape, Var inputs, Direction& dir, std::size_t n,
                               bool reverse) {
  const Var projected = matmul(tape, inputs, tape.param(dir.input));
  const Var recurrent = tape.param(dir.recurrent);
  const Var bias = tape.param(dir.bias);
  std::vector<Var> states(n);
  Var prev{};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t t = reverse ? n - 1 - k : k;
    Var pre = row(tape, projected, t);
    if (k > 0) pre = add(tape, pre, matmul(tape, prev, recurrent));
    prev = nn::tanh(tape, add_bias(tape, pre, bias));
    states[t] = prev;
  }
  return stack_rows(tape, states);
}

Encoded TinyEncoder::encode(Tape& tape, const std::vector<Token>& tokens) {
  if (tokens.empty()) throw Error("cannot encode an empty sentence");
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(bucket(t.text));
  Var x = gather_rows(tape, tape.param(embedding_), ids);
  for (auto& l : layers_) {
    const Var f = run_direction(tape, x, l.forward, tokens.size(), false);
    const Var b = run_direction(tape, x, l.backward, tokens.size(), true);
    x = concat_cols(tape, {f, b});
  }
  return {x, max_pool_rows(tape, x)};
}

}  // namespace lvsie::nn
