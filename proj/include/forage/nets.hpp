#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "forage/policy.hpp"
#include "forage/rng.hpp"

namespace forage {

inline constexpr std::size_t kHiddenUnits = 3;
inline constexpr std::size_t kWindowLength = 25;

/// Two-layer network: scores = W2^T tanh(W1^T x + b1) + b2.
///
/// Flat layout (row-major throughout):
///   W1 [input_dim x H] | b1 [H] | W2 [H x K] | b2 [K]
class FfnParams {
public:
    FfnParams() = default;
    FfnParams(std::size_t input_dim, std::size_t outputs);

    static std::size_t param_count(std::size_t input_dim, std::size_t outputs);

    std::size_t input_dim() const { return in_; }
    std::size_t hidden() const { return kHiddenUnits; }
    std::size_t outputs() const { return out_; }

    double& w1(std::size_t i, std::size_t j) { return v_[i * kHiddenUnits + j]; }
    double w1(std::size_t i, std::size_t j) const { return v_[i * kHiddenUnits + j]; }
    double& b1(std::size_t j) { return v_[b1_off() + j]; }
    double b1(std::size_t j) const { return v_[b1_off() + j]; }
    double& w2(std::size_t j, std::size_t k) { return v_[w2_off() + j * out_ + k]; }
    double w2(std::size_t j, std::size_t k) const { return v_[w2_off() + j * out_ + k]; }
    double& b2(std::size_t k) { return v_[b2_off() + k]; }
    double b2(std::size_t k) const { return v_[b2_off() + k]; }

    std::span<double> flat() { return v_; }
    std::span<const double> flat() const { return v_; }

    bool same_shape(const FfnParams& o) const { return in_ == o.in_ && out_ == o.out_; }
    friend bool operator==(const FfnParams&, const FfnParams&) = default;

private:
    std::size_t b1_off() const { return in_ * kHiddenUnits; }
    std::size_t w2_off() const { return b1_off() + kHiddenUnits; }
    std::size_t b2_off() const { return w2_off() + kHiddenUnits * out_; }

    std::size_t in_ = 0;
    std::size_t out_ = 0;
    std::vector<double> v_;
};

enum Gate : std::size_t { kInputGate = 0, kForgetGate = 1, kCandidate = 2, kOutputGate = 3 };
inline constexpr std::size_t kGateCount = 4;

/// LSTM first layer (hidden width H) followed by the linear readout.
///
/// Each gate g in order (input, forget, candidate, output) owns a weight matrix
/// [(input_dim + H) x H] whose first input_dim rows act on x_t and last H rows on h_{t-1}.
/// Flat layout (row-major):
///   W_i | W_f | W_g | W_o | b_i [H] | b_f [H] | b_g [H] | b_o [H] | W2 [H x K] | b2 [K]
class LstmParams {
public:
    LstmParams() = default;
    LstmParams(std::size_t input_dim, std::size_t outputs);

    static std::size_t param_count(std::size_t input_dim, std::size_t outputs);

    std::size_t input_dim() const { return in_; }
    std::size_t hidden() const { return kHiddenUnits; }
    std::size_t outputs() const { return out_; }

    /// Row r < input_dim addresses x, rows input_dim.. address the recurrent state.
    double& w(std::size_t gate, std::size_t r, std::size_t j) { return v_[gate_off(gate) + r * kHiddenUnits + j]; }
    double w(std::size_t gate, std::size_t r, std::size_t j) const {
        return v_[gate_off(gate) + r * kHiddenUnits + j];
    }
    double& b(std::size_t gate, std::size_t j) { return v_[bias_off() + gate * kHiddenUnits + j]; }
    double b(std::size_t gate, std::size_t j) const { return v_[bias_off() + gate * kHiddenUnits + j]; }
    double& w2(std::size_t j, std::size_t k) { return v_[w2_off() + j * out_ + k]; }
    double w2(std::size_t j, std::size_t k) const { return v_[w2_off() + j * out_ + k]; }
    double& b2(std::size_t k) { return v_[b2_off() + k]; }
    double b2(std::size_t k) const { return v_[b2_off() + k]; }

    std::span<double> flat() { return v_; }
    std::span<const double> flat() const { return v_; }

    bool same_shape(const LstmParams& o) const { return in_ == o.in_ && out_ == o.out_; }
    friend bool operator==(const LstmParams&, const LstmParams&) = default;

private:
    std::size_t gate_rows() const { return in_ + kHiddenUnits; }
    std::size_t gate_off(std::size_t gate) const { return gate * gate_rows() * kHiddenUnits; }
    std::size_t bias_off() const { return kGateCount * gate_rows() * kHiddenUnits; }
    std::size_t w2_off() const { return bias_off() + kGateCount * kHiddenUnits; }
    std::size_t b2_off() const { return w2_off() + kHiddenUnits * out_; }

    std::size_t in_ = 0;
    std::size_t out_ = 0;
    std::vector<double> v_;
};

enum class Architecture { Feedforward, Lstm };

using NetParams = std::variant<FfnParams, LstmParams>;

Architecture architecture(const NetParams& p);
std::span<double> flat(NetParams& p);
std::span<const double> flat(const NetParams& p);
std::size_t outputs(const NetParams& p);
bool same_shape(const NetParams& a, const NetParams& b);

/// Rolling sequence of the most recent observations, oldest first.
class ObservationWindow {
public:
    explicit ObservationWindow(std::size_t capacity = kWindowLength);

    void push(Observation obs);
    void clear() { items_.clear(); }

    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return items_.empty(); }
    const Observation& operator[](std::size_t i) const { return items_[i]; }
    const Observation& back() const { return items_.back(); }
    std::span<const Observation> items() const { return items_; }

private:
    std::size_t capacity_;
    std::vector<Observation> items_;
};

std::vector<double> ffn_forward(const FfnParams& params, std::span<const double> input);

struct LstmResult {
    std::vector<double> scores;
    std::vector<double> hidden;
    std::vector<double> cell;
};

/// Runs the recursion over `sequence` from a zero state and reads out the final hidden state.
LstmResult lstm_forward(const LstmParams& params, std::span<const Observation> sequence);
inline LstmResult lstm_forward(const LstmParams& params, const ObservationWindow& window) {
    return lstm_forward(params, window.items());
}

/// Gradient of dot(scores, output_grad) with respect to every parameter.
FfnParams ffn_gradient(const FfnParams& params, std::span<const double> input, std::span<const double> output_grad);

/// Backpropagation through time over the whole sequence.
LstmParams lstm_gradient(const LstmParams& params, std::span<const Observation> sequence,
                         std::span<const double> output_grad);

/// Feedforward nets read only the newest observation; LSTM nets read the whole window.
std::vector<double> forward(const NetParams& params, const ObservationWindow& window);
NetParams gradient(const NetParams& params, const ObservationWindow& window, std::span<const double> output_grad);

/// Weights uniform in [-0.5, 0.5], biases zero.
FfnParams init_ffn(Rng& rng, std::size_t input_dim, std::size_t outputs);
LstmParams init_lstm(Rng& rng, std::size_t input_dim, std::size_t outputs);
NetParams init_params(Rng& rng, Architecture arch, std::size_t input_dim, std::size_t outputs);

/// Single-line text form: "ffn|lstm <input_dim> <outputs> <values...>".
void write_params(std::ostream& os, const NetParams& params);
NetParams read_params(std::istream& is);

}  // namespace forage
