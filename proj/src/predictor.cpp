// SPDX-License-Identifier: Apache-2.0
#include "passlab/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "passlab/codebook.hpp"
#include "passlab/kernels.hpp"

namespace passlab {

void PredictorArch::validate() const {
    if (users < 1) throw ConfigError("predictor: users must be >= 1");
    if (codebook_size < 2) throw ConfigError("predictor: codebook_size must be >= 2");
    if (n_patches < 1 || patch_len < 1) throw ConfigError("predictor: empty patch grid");
    if (embed_dim < 1) throw ConfigError("predictor: embed_dim must be >= 1");
    if (hidden < 1) throw ConfigError("predictor: hidden must be >= 1");
    if (experts < 0) throw ConfigError("predictor: experts must be >= 0");
    if (!(rho > 0)) throw ConfigError("predictor: rho must be > 0");
}

namespace {

// Offsets of every tensor inside the flat parameter vector. All weight
// matrices are stored (out x in) row-major so forward passes are row dots.
struct Layout {
    const PredictorArch arch;
    std::size_t em[4]{};       // embed_dim x patch_len each
    std::size_t em_off[4]{};   // embed_dim each
    std::size_t wh = 0;        // hidden x trunk_dim
    std::size_t bh = 0;        // hidden
    struct Head {
        std::size_t base_w = 0, base_b = 0;   // F x hidden, F
        std::vector<std::size_t> expert_w, expert_b;
        std::size_t gate_w = 0, gate_b = 0;   // E x hidden, E
    };
    std::vector<Head> heads;
    std::size_t a0 = 0;
    std::size_t a_expert = 0;  // E
    std::size_t total = 0;

    explicit Layout(const PredictorArch& a) : arch(a) {
        std::size_t off = 0;
        const auto take = [&off](std::size_t n) {
            const std::size_t at = off;
            off += n;
            return at;
        };
        const std::size_t S = a.embed_dim;
        const std::size_t Lp = a.patch_len;
        const std::size_t H = a.hidden;
        const std::size_t F = a.codebook_size;
        const std::size_t E = a.experts;
        for (int i = 0; i < 4; ++i) em[i] = take(S * Lp);
        for (int i = 0; i < 4; ++i) em_off[i] = take(S);
        wh = take(H * static_cast<std::size_t>(a.trunk_dim()));
        bh = take(H);
        heads.resize(a.users);
        for (auto& head : heads) {
            head.base_w = take(F * H);
            head.base_b = take(F);
            head.expert_w.resize(E);
            head.expert_b.resize(E);
            for (std::size_t e = 0; e < E; ++e) {
                head.expert_w[e] = take(F * H);
                head.expert_b[e] = take(F);
            }
            if (E > 0) {
                head.gate_w = take(E * H);
                head.gate_b = take(E);
            }
        }
        a0 = take(1);
        if (E > 0) a_expert = take(E);
        total = off;
    }
};

void matvec(const double* w, std::size_t out_dim, std::size_t in_dim, const double* x,
            const double* bias, double* out) {
    const auto& ops = kernels::active();
    for (std::size_t r = 0; r < out_dim; ++r)
        out[r] = ops.dot(w + r * in_dim, x, in_dim) + (bias != nullptr ? bias[r] : 0.0);
}

// dx += W^T dout; dW += dout x^T; db += dout
void matvec_backward(const double* w, double* dw, double* db, std::size_t out_dim,
                     std::size_t in_dim, const double* x, double* dx, const double* dout) {
    const auto& ops = kernels::active();
    for (std::size_t r = 0; r < out_dim; ++r) {
        const double g = dout[r];
        if (g == 0.0) continue;
        if (dx != nullptr) ops.axpy(g, w + r * in_dim, dx, in_dim);
        ops.axpy(g, x, dw + r * in_dim, in_dim);
        if (db != nullptr) db[r] += g;
    }
}

void softmax_inplace(std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0;
    for (double& x : v) {
        x = std::exp(x - m);
        sum += x;
    }
    for (double& x : v) x /= sum;
}

double logsumexp(const std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    double sum = 0;
    for (double x : v) sum += std::exp(x - m);
    return m + std::log(sum);
}

struct Forward {
    std::vector<double> z;   // trunk input
    std::vector<double> h;   // hidden activations
    std::vector<std::vector<double>> p0;      // per user, F
    std::vector<std::vector<std::vector<double>>> q;  // per user, per expert, F
    std::vector<std::vector<double>> gate;    // per user, E
    std::vector<std::vector<double>> logits;  // per user, F
};

void run_forward(const PredictorParams& params, const Layout& lay, std::span<const double> x,
                 Forward& fwd) {
    const PredictorArch& a = params.arch;
    if (x.size() != static_cast<std::size_t>(a.input_dim()))
        throw std::invalid_argument(strfmt("predict: feature length %zu does not match %d",
                                            x.size(), a.input_dim()));
    const double* th = params.theta.data();
    const std::size_t S = a.embed_dim;
    const std::size_t Lp = a.patch_len;
    const std::size_t Np = a.n_patches;
    const std::size_t K = a.users;
    const std::size_t H = a.hidden;
    const std::size_t F = a.codebook_size;
    const std::size_t E = a.experts;
    const std::size_t fpu = a.features_per_user();
    const std::size_t tpu = a.tokens_per_user() + 8;

    fwd.z.assign(a.trunk_dim(), 0.0);
    for (std::size_t u = 0; u < K; ++u) {
        for (int i = 0; i < 4; ++i) {
            for (std::size_t p = 0; p < Np; ++p) {
                const double* patch = x.data() + u * fpu + i * Np * Lp + p * Lp;
                double* token = fwd.z.data() + u * tpu + i * Np * S + p * S;
                matvec(th + lay.em[i], S, Lp, patch, th + lay.em_off[i], token);
            }
        }
        for (int j = 0; j < 8; ++j)
            fwd.z[u * tpu + 4 * Np * S + j] = x[u * fpu + 4 * Np * Lp + j];
    }

    fwd.h.assign(H, 0.0);
    matvec(th + lay.wh, H, fwd.z.size(), fwd.z.data(), th + lay.bh, fwd.h.data());
    for (double& v : fwd.h) v = std::tanh(v);

    fwd.p0.assign(K, {});
    fwd.q.assign(K, {});
    fwd.gate.assign(K, {});
    fwd.logits.assign(K, {});
    const double a0 = th[lay.a0];
    for (std::size_t u = 0; u < K; ++u) {
        const Layout::Head& head = lay.heads[u];
        fwd.p0[u].assign(F, 0.0);
        matvec(th + head.base_w, F, H, fwd.h.data(), th + head.base_b, fwd.p0[u].data());
        fwd.logits[u] = fwd.p0[u];
        for (double& v : fwd.logits[u]) v *= a0;
        if (E > 0) {
            fwd.gate[u].assign(E, 0.0);
            matvec(th + head.gate_w, E, H, fwd.h.data(), th + head.gate_b, fwd.gate[u].data());
            softmax_inplace(fwd.gate[u]);
            fwd.q[u].assign(E, std::vector<double>(F, 0.0));
            for (std::size_t e = 0; e < E; ++e) {
                matvec(th + head.expert_w[e], F, H, fwd.h.data(), th + head.expert_b[e],
                       fwd.q[u][e].data());
                const double scale = a.rho * th[lay.a_expert + e] * fwd.gate[u][e];
                for (std::size_t f = 0; f < F; ++f) fwd.logits[u][f] += scale * fwd.q[u][e][f];
            }
        }
    }
}

// Returns the theta-weighted cross entropy of one sample and accumulates
// parameter gradients when grad != nullptr.
double run_backward(const PredictorParams& params, const Layout& lay, const Forward& fwd,
                    std::span<const double> x, std::span<const int> labels,
                    std::span<const double> theta_w, double* grad) {
    const PredictorArch& a = params.arch;
    const double* th = params.theta.data();
    const std::size_t S = a.embed_dim;
    const std::size_t Lp = a.patch_len;
    const std::size_t Np = a.n_patches;
    const std::size_t K = a.users;
    const std::size_t H = a.hidden;
    const std::size_t F = a.codebook_size;
    const std::size_t E = a.experts;
    const std::size_t fpu = a.features_per_user();
    const std::size_t tpu = a.tokens_per_user() + 8;
    const auto& ops = kernels::active();

    double loss = 0;
    std::vector<double> dh(H, 0.0);
    const double a0 = th[lay.a0];
    for (std::size_t u = 0; u < K; ++u) {
        const int label = labels[u];
        if (label < 0 || label >= static_cast<int>(F))
            throw std::invalid_argument("loss: label outside the codebook");
        const double lse = logsumexp(fwd.logits[u]);
        loss += theta_w[u] * (lse - fwd.logits[u][label]);
        if (grad == nullptr) continue;

        const Layout::Head& head = lay.heads[u];
        std::vector<double> g(F);
        for (std::size_t f = 0; f < F; ++f) {
            const double p = std::exp(fwd.logits[u][f] - lse);
            g[f] = theta_w[u] * (p - (static_cast<int>(f) == label ? 1.0 : 0.0));
        }

        grad[lay.a0] += ops.dot(g.data(), fwd.p0[u].data(), F);
        std::vector<double> dp0(F);
        for (std::size_t f = 0; f < F; ++f) dp0[f] = a0 * g[f];
        matvec_backward(th + head.base_w, grad + head.base_w, grad + head.base_b, F, H,
                        fwd.h.data(), dh.data(), dp0.data());

        if (E > 0) {
            std::vector<double> dgate(E, 0.0);
            std::vector<double> dq(F);
            for (std::size_t e = 0; e < E; ++e) {
                const double ae = th[lay.a_expert + e];
                const double gq = ops.dot(g.data(), fwd.q[u][e].data(), F);
                grad[lay.a_expert + e] += a.rho * fwd.gate[u][e] * gq;
                dgate[e] = a.rho * ae * gq;
                const double scale = a.rho * ae * fwd.gate[u][e];
                for (std::size_t f = 0; f < F; ++f) dq[f] = scale * g[f];
                matvec_backward(th + head.expert_w[e], grad + head.expert_w[e],
                                grad + head.expert_b[e], F, H, fwd.h.data(), dh.data(), dq.data());
            }
            // softmax jacobian for the gate
            double inner = 0;
            for (std::size_t e = 0; e < E; ++e) inner += dgate[e] * fwd.gate[u][e];
            std::vector<double> du(E);
            for (std::size_t e = 0; e < E; ++e) du[e] = fwd.gate[u][e] * (dgate[e] - inner);
            matvec_backward(th + head.gate_w, grad + head.gate_w, grad + head.gate_b, E, H,
                            fwd.h.data(), dh.data(), du.data());
        }
    }
    if (grad == nullptr) return loss;

    std::vector<double> dz(fwd.z.size(), 0.0);
    std::vector<double> dpre(H);
    for (std::size_t j = 0; j < H; ++j) dpre[j] = dh[j] * (1.0 - fwd.h[j] * fwd.h[j]);
    matvec_backward(th + lay.wh, grad + lay.wh, grad + lay.bh, H, fwd.z.size(), fwd.z.data(),
                    dz.data(), dpre.data());

    for (std::size_t u = 0; u < K; ++u) {
        for (int i = 0; i < 4; ++i) {
            for (std::size_t p = 0; p < Np; ++p) {
                const double* patch = x.data() + u * fpu + i * Np * Lp + p * Lp;
                const double* dtoken = dz.data() + u * tpu + i * Np * S + p * S;
                matvec_backward(th + lay.em[i], grad + lay.em[i], grad + lay.em_off[i], S, Lp,
                                patch, nullptr, dtoken);
            }
        }
        // stats entries feed the trunk directly; nothing upstream to update
    }
    return loss;
}

void check_sample(const PredictorArch& a, const TrainingSample& s) {
    if (s.features.size() != static_cast<std::size_t>(a.input_dim()))
        throw std::invalid_argument(strfmt("sample: feature length %zu does not match %d",
                                            s.features.size(), a.input_dim()));
    if (s.labels.size() != static_cast<std::size_t>(a.users))
        throw std::invalid_argument("sample: one label per user required");
}

}  // namespace

std::size_t param_count(const PredictorArch& arch) {
    arch.validate();
    return Layout(arch).total;
}

PredictorParams init_params(const PredictorArch& arch, std::uint64_t seed) {
    arch.validate();
    const Layout lay(arch);
    PredictorParams params;
    params.arch = arch;
    params.theta.assign(lay.total, 0.0);
    Rng rng(substream_seed(seed, "predictor.init", 0));

    const auto fill = [&](std::size_t off, std::size_t n, std::size_t fan_in) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (std::size_t i = 0; i < n; ++i) params.theta[off + i] = rng.uniform(-bound, bound);
    };
    const std::size_t S = arch.embed_dim;
    const std::size_t Lp = arch.patch_len;
    const std::size_t H = arch.hidden;
    const std::size_t F = arch.codebook_size;
    const std::size_t E = arch.experts;
    for (int i = 0; i < 4; ++i) fill(lay.em[i], S * Lp, Lp);
    fill(lay.wh, H * static_cast<std::size_t>(arch.trunk_dim()), arch.trunk_dim());
    for (const auto& head : lay.heads) {
        fill(head.base_w, F * H, H);
        for (std::size_t e = 0; e < E; ++e) fill(head.expert_w[e], F * H, H);
        if (E > 0) fill(head.gate_w, E * H, H);
    }
    params.theta[lay.a0] = 1.0;
    for (std::size_t e = 0; e < E; ++e) params.theta[lay.a_expert + e] = 1.0;
    return params;
}

std::vector<Prediction> predict(const PredictorParams& params, std::span<const double> features) {
    params.arch.validate();
    const Layout lay(params.arch);
    if (params.theta.size() != lay.total)
        throw std::invalid_argument("predict: parameter vector does not match the arch");
    Forward fwd;
    run_forward(params, lay, features, fwd);
    std::vector<Prediction> out(params.arch.users);
    for (int u = 0; u < params.arch.users; ++u) {
        Prediction& pr = out[u];
        pr.prob = fwd.logits[u];
        softmax_inplace(pr.prob);
        pr.ranking.resize(pr.prob.size());
        std::iota(pr.ranking.begin(), pr.ranking.end(), 0);
        std::sort(pr.ranking.begin(), pr.ranking.end(), [&pr](int a, int b) {
            if (pr.prob[a] != pr.prob[b]) return pr.prob[a] > pr.prob[b];
            return a < b;
        });
    }
    return out;
}

double loss_and_gradient(const PredictorParams& params, std::span<const TrainingSample> samples,
                         std::span<const double> theta_weights, std::vector<double>* grad) {
    if (samples.empty()) throw std::invalid_argument("loss: empty batch");
    const Layout lay(params.arch);
    if (theta_weights.size() != static_cast<std::size_t>(params.arch.users))
        throw std::invalid_argument("loss: one weight per user required");
    if (grad != nullptr) grad->assign(lay.total, 0.0);
    Forward fwd;
    double loss = 0;
    for (const TrainingSample& s : samples) {
        check_sample(params.arch, s);
        run_forward(params, lay, s.features, fwd);
        loss += run_backward(params, lay, fwd, s.features, s.labels, theta_weights,
                             grad != nullptr ? grad->data() : nullptr);
    }
    const double inv = 1.0 / static_cast<double>(samples.size());
    if (grad != nullptr)
        for (double& g : *grad) g *= inv;
    return loss * inv;
}

TrainReport train(PredictorParams& params, std::span<const TrainingSample> samples,
                  const TrainHyper& hyper) {
    params.arch.validate();
    if (samples.empty()) throw std::invalid_argument("train: no samples");
    if (hyper.epochs < 1 || hyper.batch < 1) throw ConfigError("train: epochs and batch must be >= 1");
    if (!(hyper.learning_rate > 0)) throw ConfigError("train: learning_rate must be > 0");
    if (!(hyper.dwa_temp > 0)) throw ConfigError("train: dwa_temp must be > 0");
    const Layout lay(params.arch);
    const int K = params.arch.users;
    for (const TrainingSample& s : samples) check_sample(params.arch, s);

    TrainReport report;
    report.per_user_loss = RMat(hyper.epochs, K);
    report.theta_weights = RMat(hyper.epochs, K);
    report.total_loss.assign(hyper.epochs, 0.0);

    std::vector<double> theta_w(K, 1.0);
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad;
    std::vector<TrainingSample> batch;
    Forward fwd;

    for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
        if (epoch >= 2) {
            // loss-ratio weighting over the previous two epochs
            std::vector<double> r(K);
            double denom = 0;
            for (int k = 0; k < K; ++k) {
                const double prev = report.per_user_loss.at(epoch - 1, k);
                const double prev2 = std::max(report.per_user_loss.at(epoch - 2, k), 1e-12);
                r[k] = std::exp(prev / prev2 / hyper.dwa_temp);
                denom += r[k];
            }
            for (int k = 0; k < K; ++k) theta_w[k] = K * r[k] / denom;
        } else {
            std::fill(theta_w.begin(), theta_w.end(), 1.0);
        }
        for (int k = 0; k < K; ++k) report.theta_weights.at(epoch, k) = theta_w[k];

        Rng shuffle_rng(substream_seed(hyper.seed, "train.shuffle", epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);

        std::vector<double> raw_loss(K, 0.0);
        for (std::size_t at = 0; at < order.size(); at += hyper.batch) {
            const std::size_t stop = std::min(order.size(), at + hyper.batch);
            batch.clear();
            for (std::size_t i = at; i < stop; ++i) batch.push_back(samples[order[i]]);
            (void)loss_and_gradient(params, batch, theta_w, &grad);
            const auto& ops = kernels::active();
            ops.axpy(-hyper.learning_rate, grad.data(), params.theta.data(), params.theta.size());
        }
        // epoch-end raw (unweighted) losses drive the weighting dynamics
        const std::vector<double> ones(K, 1.0);
        for (const TrainingSample& s : samples) {
            run_forward(params, lay, s.features, fwd);
            for (int k = 0; k < K; ++k) {
                const double lse = logsumexp(fwd.logits[k]);
                raw_loss[k] += lse - fwd.logits[k][s.labels[k]];
            }
        }
        double total = 0;
        for (int k = 0; k < K; ++k) {
            const double avg = raw_loss[k] / static_cast<double>(samples.size());
            if (!std::isfinite(avg))
                throw PropertyViolation(strfmt("train: loss diverged at epoch %d", epoch + 1));
            report.per_user_loss.at(epoch, k) = avg;
            total += theta_w[k] * avg;
        }
        report.total_loss[epoch] = total;
    }
    return report;
}

double finite_difference_check(const PredictorParams& params,
                               std::span<const TrainingSample> samples,
                               std::span<const double> theta_weights) {
    std::vector<double> grad;
    (void)loss_and_gradient(params, samples, theta_weights, &grad);
    PredictorParams probe = params;
    const double step = 1e-5;
    double worst = 0;
    for (std::size_t i = 0; i < probe.theta.size(); ++i) {
        const double keep = probe.theta[i];
        probe.theta[i] = keep + step;
        const double up = loss_and_gradient(probe, samples, theta_weights, nullptr);
        probe.theta[i] = keep - step;
        const double down = loss_and_gradient(probe, samples, theta_weights, nullptr);
        probe.theta[i] = keep;
        const double fd = (up - down) / (2.0 * step);
        const double denom = std::max(std::abs(fd) + std::abs(grad[i]), 1e-7);
        worst = std::max(worst, std::abs(fd - grad[i]) / denom);
    }
    return worst;
}

EvalTable evaluate(const PredictorParams& params, std::span<const TrainingSample> samples,
                   std::span<const int> s_values, const ObjectiveFn& objective) {
    if (samples.empty()) throw std::invalid_argument("evaluate: no samples");
    EvalTable table;
    table.s_values.assign(s_values.begin(), s_values.end());
    std::vector<std::vector<int>> rankings;
    std::vector<int> truths;
    double ratio_sum = 0;
    std::size_t ratio_n = 0;
    for (const TrainingSample& s : samples) {
        check_sample(params.arch, s);
        const auto preds = predict(params, s.features);
        std::vector<int> top1(preds.size());
        for (std::size_t u = 0; u < preds.size(); ++u) {
            rankings.push_back(preds[u].ranking);
            truths.push_back(s.labels[u]);
            top1[u] = preds[u].ranking.front();
        }
        if (objective && s.objective > 0) {
            ratio_sum += objective(s, top1) / s.objective;
            ++ratio_n;
        }
    }
    for (int S : s_values) table.accuracy.push_back(top_s_accuracy(rankings, truths, S));
    if (ratio_n > 0) table.sum_rate_ratio = ratio_sum / static_cast<double>(ratio_n);
    return table;
}

void save_params_json(const PredictorParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_params_json: cannot open " + path);
    const PredictorArch& a = params.arch;
    out << "{\n  \"v\": 1,\n  \"arch\": {\n";
    out << "    \"users\": " << a.users << ",\n";
    out << "    \"codebook_size\": " << a.codebook_size << ",\n";
    out << "    \"n_patches\": " << a.n_patches << ",\n";
    out << "    \"patch_len\": " << a.patch_len << ",\n";
    out << "    \"embed_dim\": " << a.embed_dim << ",\n";
    out << "    \"hidden\": " << a.hidden << ",\n";
    out << "    \"experts\": " << a.experts << ",\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", a.rho);
    out << "    \"rho\": " << buf << "\n  },\n  \"theta\": [";
    for (std::size_t i = 0; i < params.theta.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", params.theta[i]);
        out << (i == 0 ? "" : ", ") << buf;
    }
    out << "]\n}\n";
}

PredictorParams load_params_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("load_params_json: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("load_params_json: ") + e.what());
    }
    if (doc.value("v", 0) != 1) throw ConfigError("load_params_json: unsupported version");
    PredictorParams params;
    const auto& arch = doc.at("arch");
    params.arch.users = arch.at("users").get<int>();
    params.arch.codebook_size = arch.at("codebook_size").get<int>();
    params.arch.n_patches = arch.at("n_patches").get<int>();
    params.arch.patch_len = arch.at("patch_len").get<int>();
    params.arch.embed_dim = arch.at("embed_dim").get<int>();
    params.arch.hidden = arch.at("hidden").get<int>();
    params.arch.experts = arch.at("experts").get<int>();
    params.arch.rho = arch.at("rho").get<double>();
    params.arch.validate();
    params.theta = doc.at("theta").get<std::vector<double>>();
    if (params.theta.size() != param_count(params.arch))
        throw ConfigError(strfmt("load_params_json: expected %zu parameters, found %zu",
                                  param_count(params.arch), params.theta.size()));
    return params;
}

NearestCentroid NearestCentroid::fit(std::span<const TrainingSample> samples, int codebook_size) {
    if (samples.empty()) throw std::invalid_argument("centroid fit: no samples");
    if (samples.front().labels.size() != 1)
        throw std::invalid_argument("centroid fit: single-user samples only");
    NearestCentroid nc;
    nc.codebook_size = codebook_size;
    const std::size_t dim = samples.front().features.size();
    nc.centroids.assign(codebook_size, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> count(codebook_size, 0);
    for (const TrainingSample& s : samples) {
        const int label = s.labels[0];
        if (label < 0 || label >= codebook_size)
            throw std::invalid_argument("centroid fit: label outside the codebook");
        if (s.features.size() != dim)
            throw std::invalid_argument("centroid fit: inconsistent feature lengths");
        for (std::size_t i = 0; i < dim; ++i) nc.centroids[label][i] += s.features[i];
        ++count[label];
    }
    for (int c = 0; c < codebook_size; ++c)
        if (count[c] > 0)
            for (double& v : nc.centroids[c]) v /= static_cast<double>(count[c]);
    return nc;
}

Prediction NearestCentroid::predict(std::span<const double> features) const {
    Prediction pr;
    std::vector<double> neg_dist(codebook_size);
    for (int c = 0; c < codebook_size; ++c) {
        double d2 = 0;
        for (std::size_t i = 0; i < features.size(); ++i) {
            const double d = features[i] - centroids[c][i];
            d2 += d * d;
        }
        neg_dist[c] = -d2;
    }
    pr.prob = neg_dist;
    softmax_inplace(pr.prob);
    pr.ranking.resize(codebook_size);
    std::iota(pr.ranking.begin(), pr.ranking.end(), 0);
    std::sort(pr.ranking.begin(), pr.ranking.end(), [&neg_dist](int a, int b) {
        if (neg_dist[a] != neg_dist[b]) return neg_dist[a] > neg_dist[b];
        return a < b;
    });
    return pr;
}

Prediction random_prediction(int codebook_size, Rng& rng) {
    Prediction pr;
    pr.prob.assign(codebook_size, 1.0 / codebook_size);
    pr.ranking.resize(codebook_size);
    std::iota(pr.ranking.begin(), pr.ranking.end(), 0);
    for (std::size_t i = pr.ranking.size(); i > 1; --i)
        std::swap(pr.ranking[i - 1], pr.ranking[rng.below(i)]);
    return pr;
}

}  // namespace passlab
