#include "forage/nets.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "forage/format.hpp"

namespace forage {
namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_input(std::size_t expected, std::size_t got, const char* who) {
    if (expected != got) {
        throw std::invalid_argument(std::string(who) + ": input dimension " + std::to_string(got) +
                                    " does not match network input " + std::to_string(expected));
    }
}

// Per-timestep activations kept for backpropagation through time.
struct LstmStep {
    std::vector<double> z;  // [x_t ; h_{t-1}]
    double gate[kGateCount][kHiddenUnits];
    double c_prev[kHiddenUnits];
    double c[kHiddenUnits];
};

std::vector<LstmStep> lstm_unroll(const LstmParams& p, std::span<const Observation> seq) {
    const std::size_t in = p.input_dim();
    const std::size_t rows = in + kHiddenUnits;
    std::vector<LstmStep> steps(seq.size());
    double h[kHiddenUnits] = {0.0, 0.0, 0.0};
    double c[kHiddenUnits] = {0.0, 0.0, 0.0};

    for (std::size_t t = 0; t < seq.size(); ++t) {
        check_input(in, seq[t].size(), "lstm_forward");
        LstmStep& s = steps[t];
        s.z.resize(rows);
        for (std::size_t r = 0; r < in; ++r) s.z[r] = seq[t].values[r];
        for (std::size_t j = 0; j < kHiddenUnits; ++j) s.z[in + j] = h[j];

        for (std::size_t g = 0; g < kGateCount; ++g) {
            for (std::size_t j = 0; j < kHiddenUnits; ++j) {
                double a = p.b(g, j);
                for (std::size_t r = 0; r < rows; ++r) a += p.w(g, r, j) * s.z[r];
                s.gate[g][j] = g == kCandidate ? std::tanh(a) : logistic(a);
            }
        }
        for (std::size_t j = 0; j < kHiddenUnits; ++j) {
            s.c_prev[j] = c[j];
            c[j] = s.gate[kForgetGate][j] * c[j] + s.gate[kInputGate][j] * s.gate[kCandidate][j];
            s.c[j] = c[j];
            h[j] = s.gate[kOutputGate][j] * std::tanh(c[j]);
        }
    }
    return steps;
}

}  // namespace

FfnParams::FfnParams(std::size_t input_dim, std::size_t outputs)
    : in_(input_dim), out_(outputs), v_(param_count(input_dim, outputs), 0.0) {}

std::size_t FfnParams::param_count(std::size_t input_dim, std::size_t outputs) {
    return input_dim * kHiddenUnits + kHiddenUnits + kHiddenUnits * outputs + outputs;
}

LstmParams::LstmParams(std::size_t input_dim, std::size_t outputs)
    : in_(input_dim), out_(outputs), v_(param_count(input_dim, outputs), 0.0) {}

std::size_t LstmParams::param_count(std::size_t input_dim, std::size_t outputs) {
    return kGateCount * (input_dim + kHiddenUnits) * kHiddenUnits + kGateCount * kHiddenUnits +
           kHiddenUnits * outputs + outputs;
}

Architecture architecture(const NetParams& p) {
    return std::holds_alternative<FfnParams>(p) ? Architecture::Feedforward : Architecture::Lstm;
}

std::span<double> flat(NetParams& p) {
    return std::visit([](auto& x) { return x.flat(); }, p);
}

std::span<const double> flat(const NetParams& p) {
    return std::visit([](const auto& x) { return x.flat(); }, p);
}

std::size_t outputs(const NetParams& p) {
    return std::visit([](const auto& x) { return x.outputs(); }, p);
}

bool same_shape(const NetParams& a, const NetParams& b) {
    if (a.index() != b.index()) return false;
    if (const auto* fa = std::get_if<FfnParams>(&a)) return fa->same_shape(std::get<FfnParams>(b));
    return std::get<LstmParams>(a).same_shape(std::get<LstmParams>(b));
}

ObservationWindow::ObservationWindow(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ObservationWindow: capacity must be >= 1");
    items_.reserve(capacity_);
}

void ObservationWindow::push(Observation obs) {
    if (items_.size() == capacity_) items_.erase(items_.begin());
    items_.push_back(std::move(obs));
}

std::vector<double> ffn_forward(const FfnParams& p, std::span<const double> x) {
    check_input(p.input_dim(), x.size(), "ffn_forward");
    double hidden[kHiddenUnits];
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
        double a = p.b1(j);
        for (std::size_t i = 0; i < x.size(); ++i) a += p.w1(i, j) * x[i];
        hidden[j] = std::tanh(a);
    }
    std::vector<double> scores(p.outputs());
    for (std::size_t k = 0; k < scores.size(); ++k) {
        double s = p.b2(k);
        for (std::size_t j = 0; j < kHiddenUnits; ++j) s += p.w2(j, k) * hidden[j];
        scores[k] = s;
    }
    return scores;
}

FfnParams ffn_gradient(const FfnParams& p, std::span<const double> x, std::span<const double> og) {
    check_input(p.input_dim(), x.size(), "ffn_gradient");
    if (og.size() != p.outputs()) throw std::invalid_argument("ffn_gradient: output gradient size mismatch");

    FfnParams g(p.input_dim(), p.outputs());
    double hidden[kHiddenUnits];
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
        double a = p.b1(j);
        for (std::size_t i = 0; i < x.size(); ++i) a += p.w1(i, j) * x[i];
        hidden[j] = std::tanh(a);
    }
    for (std::size_t k = 0; k < og.size(); ++k) {
        g.b2(k) = og[k];
        for (std::size_t j = 0; j < kHiddenUnits; ++j) g.w2(j, k) = hidden[j] * og[k];
    }
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
        double dh = 0.0;
        for (std::size_t k = 0; k < og.size(); ++k) dh += p.w2(j, k) * og[k];
        const double da = dh * (1.0 - hidden[j] * hidden[j]);
        g.b1(j) = da;
        for (std::size_t i = 0; i < x.size(); ++i) g.w1(i, j) = x[i] * da;
    }
    return g;
}

LstmResult lstm_forward(const LstmParams& p, std::span<const Observation> seq) {
    if (seq.empty()) throw std::invalid_argument("lstm_forward: empty observation window");
    const std::vector<LstmStep> steps = lstm_unroll(p, seq);
    const LstmStep& last = steps.back();

    LstmResult out;
    out.hidden.resize(kHiddenUnits);
    out.cell.assign(last.c, last.c + kHiddenUnits);
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
        out.hidden[j] = last.gate[kOutputGate][j] * std::tanh(last.c[j]);
    }
    out.scores.resize(p.outputs());
    for (std::size_t k = 0; k < p.outputs(); ++k) {
        double s = p.b2(k);
        for (std::size_t j = 0; j < kHiddenUnits; ++j) s += p.w2(j, k) * out.hidden[j];
        out.scores[k] = s;
    }
    return out;
}

LstmParams lstm_gradient(const LstmParams& p, std::span<const Observation> seq, std::span<const double> og) {
    if (seq.empty()) throw std::invalid_argument("lstm_gradient: empty observation window");
    if (og.size() != p.outputs()) throw std::invalid_argument("lstm_gradient: output gradient size mismatch");

    const std::vector<LstmStep> steps = lstm_unroll(p, seq);
    const std::size_t in = p.input_dim();
    const std::size_t rows = in + kHiddenUnits;
    LstmParams g(in, p.outputs());

    double dh[kHiddenUnits];
    double dc[kHiddenUnits] = {0.0, 0.0, 0.0};
    const LstmStep& last = steps.back();
    for (std::size_t j = 0; j < kHiddenUnits; ++j) {
        const double h = last.gate[kOutputGate][j] * std::tanh(last.c[j]);
        dh[j] = 0.0;
        for (std::size_t k = 0; k < og.size(); ++k) {
            g.w2(j, k) = h * og[k];
            dh[j] += p.w2(j, k) * og[k];
        }
    }
    for (std::size_t k = 0; k < og.size(); ++k) g.b2(k) = og[k];

    for (std::size_t t = steps.size(); t-- > 0;) {
        const LstmStep& s = steps[t];
        double da[kGateCount][kHiddenUnits];
        for (std::size_t j = 0; j < kHiddenUnits; ++j) {
            const double i = s.gate[kInputGate][j];
            const double f = s.gate[kForgetGate][j];
            const double cand = s.gate[kCandidate][j];
            const double o = s.gate[kOutputGate][j];
            const double tc = std::tanh(s.c[j]);

            dc[j] += dh[j] * o * (1.0 - tc * tc);
            da[kOutputGate][j] = dh[j] * tc * o * (1.0 - o);
            da[kInputGate][j] = dc[j] * cand * i * (1.0 - i);
            da[kCandidate][j] = dc[j] * i * (1.0 - cand * cand);
            da[kForgetGate][j] = dc[j] * s.c_prev[j] * f * (1.0 - f);
            dc[j] *= f;
        }
        double dz_h[kHiddenUnits] = {0.0, 0.0, 0.0};
        for (std::size_t gate = 0; gate < kGateCount; ++gate) {
            for (std::size_t j = 0; j < kHiddenUnits; ++j) {
                const double a = da[gate][j];
                g.b(gate, j) += a;
                for (std::size_t r = 0; r < rows; ++r) g.w(gate, r, j) += s.z[r] * a;
                for (std::size_t r = 0; r < kHiddenUnits; ++r) dz_h[r] += p.w(gate, in + r, j) * a;
            }
        }
        for (std::size_t j = 0; j < kHiddenUnits; ++j) dh[j] = dz_h[j];
    }
    return g;
}

std::vector<double> forward(const NetParams& params, const ObservationWindow& window) {
    if (window.empty()) throw std::invalid_argument("forward: empty observation window");
    if (const auto* ffn = std::get_if<FfnParams>(&params)) return ffn_forward(*ffn, window.back().values);
    return lstm_forward(std::get<LstmParams>(params), window).scores;
}

NetParams gradient(const NetParams& params, const ObservationWindow& window, std::span<const double> output_grad) {
    if (window.empty()) throw std::invalid_argument("gradient: empty observation window");
    if (const auto* ffn = std::get_if<FfnParams>(&params)) {
        return ffn_gradient(*ffn, window.back().values, output_grad);
    }
    return lstm_gradient(std::get<LstmParams>(params), window.items(), output_grad);
}

FfnParams init_ffn(Rng& rng, std::size_t input_dim, std::size_t outputs) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    FfnParams p(input_dim, outputs);
    for (std::size_t i = 0; i < input_dim; ++i)
        for (std::size_t j = 0; j < kHiddenUnits; ++j) p.w1(i, j) = u(rng);
    for (std::size_t j = 0; j < kHiddenUnits; ++j)
        for (std::size_t k = 0; k < outputs; ++k) p.w2(j, k) = u(rng);
    return p;
}

LstmParams init_lstm(Rng& rng, std::size_t input_dim, std::size_t outputs) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    LstmParams p(input_dim, outputs);
    for (std::size_t g = 0; g < kGateCount; ++g)
        for (std::size_t r = 0; r < input_dim + kHiddenUnits; ++r)
            for (std::size_t j = 0; j < kHiddenUnits; ++j) p.w(g, r, j) = u(rng);
    for (std::size_t j = 0; j < kHiddenUnits; ++j)
        for (std::size_t k = 0; k < outputs; ++k) p.w2(j, k) = u(rng);
    return p;
}

NetParams init_params(Rng& rng, Architecture arch, std::size_t input_dim, std::size_t outputs) {
    if (arch == Architecture::Feedforward) return init_ffn(rng, input_dim, outputs);
    return init_lstm(rng, input_dim, outputs);
}

void write_params(std::ostream& os, const NetParams& params) {
    const bool ffn = architecture(params) == Architecture::Feedforward;
    const std::size_t in = std::visit([](const auto& x) { return x.input_dim(); }, params);
    os << (ffn ? "ffn" : "lstm") << ' ' << in << ' ' << outputs(params);
    for (double v : flat(params)) os << ' ' << format_double(v);
}

NetParams read_params(std::istream& is) {
    std::string tag;
    std::size_t in = 0;
    std::size_t out = 0;
    if (!(is >> tag >> in >> out)) throw std::runtime_error("read_params: missing architecture header");
    NetParams params;
    if (tag == "ffn") {
        params = FfnParams(in, out);
    } else if (tag == "lstm") {
        params = LstmParams(in, out);
    } else {
        throw std::runtime_error("read_params: unknown architecture '" + tag + "'");
    }
    for (double& v : flat(params)) {
        std::string tok;
        if (!(is >> tok)) throw std::runtime_error("read_params: truncated parameter list");
        v = parse_double(tok);
    }
    return params;
}

}  // namespace forage
