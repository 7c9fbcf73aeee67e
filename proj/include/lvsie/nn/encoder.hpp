#ifndef LVSIE_NN_ENCODER_HPP
#define LVSIE_NN_ENCODER_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "lvsie/corpus.hpp"
#include "lvsie/nn/autograd.hpp"

namespace lvsie::nn {

struct Encoded {
  Var tokens;   // n x dim()
  Var context;  // 1 x dim()
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual Encoded encode(Tape& tape, const std::vector<Token>& tokens) = 0;
  virtual std::size_t dim() const = 0;
  virtual bool trainable() const = 0;
  virtual std::string identifier() const = 0;
  virtual std::vector<Parameter*> parameters() = 0;
  virtual nlohmann::json config() const = 0;
};

struct TinyEncoderConfig {
  std::size_t vocab_buckets = 4096;
  std::size_t embed_dim = 16;
  // Per direction; the output dimension is twice this.
  std::size_t hidden_dim = 8;
  std::size_t layers = 1;
  double init_scale = 0.3;
};

nlohmann::json to_json(const TinyEncoderConfig& c);
TinyEncoderConfig tiny_encoder_config_from_json(const nlohmann::json& j);

// Hashed word embeddings followed by bidirectional Elman layers. The context
// vector is the column-wise max over the top layer.
class TinyEncoder : public Encoder {
 public:
  TinyEncoder(TinyEncoderConfig config, std::uint64_t seed);

  Encoded encode(Tape& tape, const std::vector<Token>& tokens) override;
  std::size_t dim() const override { return 2 * config_.hidden_dim; }
  bool trainable() const override { return true; }
  std::string identifier() const override;
  std::vector<Parameter*> parameters() override;
  nlohmann::json config() const override { return to_json(config_); }

  std::size_t bucket(const std::string& word) const;

 private:
  struct Direction {
    Parameter input;
    Parameter recurrent;
    Parameter bias;
  };
  struct Layer {
    Direction forward;
    Direction backward;
  };

  Var run_direction(Tape& tape, Var inputs, Direction& dir, std::size_t n, bool reverse);

  TinyEncoderConfig config_;
  Parameter embedding_;
  std::vector<Layer> layers_;
};

}  // namespace lvsie::nn

#endif  // LVSIE_NN_ENCODER_HPP
