#include "ripsel/ard.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>

#include "ripsel/errors.hpp"
#include "ripsel/rng.hpp"

namespace ripsel {

namespace {

// Clamping the pre-activation keeps the output strictly inside (0,1) in
// double precision, so the cross-entropy terms stay finite.
Real sigmoid(Real t) {
  if (t > 36.0) t = 36.0;
  if (t < -36.0) t = -36.0;
  return 1.0 / (1.0 + std::exp(-t));
}

void validate_network(const MlpNetwork& net) {
  if (net.n_inputs < 1 || net.n_hidden < 1)
    throw ConfigError("network needs at least one input and one hidden unit");
  if (net.w_ji.rows() != net.n_hidden || net.w_ji.cols() != net.n_inputs + 1 ||
      net.w_kj.size() != net.n_hidden + 1)
    throw SchemaError("network weight shapes do not match the layer sizes");
}

void validate_hyperparams(const MlpNetwork& net, const ArdHyperparams& hp) {
  const int n_groups = static_cast<int>(hp.alphas.size());
  if (n_groups < 1)
    throw ConfigError("hyperparams need at least one group");
  if (static_cast<Index>(hp.input_group.size()) != net.n_inputs)
    throw SchemaError("hyperparams map " + std::to_string(hp.input_group.size()) +
                      " inputs, network has " + std::to_string(net.n_inputs));
  if (hp.default_group < 0 || hp.default_group >= n_groups)
    throw ConfigError("default group id out of range");
  for (int g : hp.input_group)
    if (g < 0 || g >= n_groups)
      throw ConfigError("input group id out of range");
  for (Index k = 0; k < hp.alphas.size(); ++k)
    if (!(hp.alphas[k] > 0.0))
      throw ConfigError("alphas must be positive");
}

void validate_data(const MlpNetwork& net, const Matrix& x, const IntVector& labels) {
  if (x.cols() != net.n_inputs)
    throw SchemaError("data has " + std::to_string(x.cols()) +
                      " columns, network has " + std::to_string(net.n_inputs) +
                      " inputs");
  if (x.rows() != labels.size())
    throw SchemaError("row count does not match label count");
}

int param_group(const MlpNetwork& net, const ArdHyperparams& hp, Index p) {
  const Index wji = net.n_hidden * (net.n_inputs + 1);
  if (p < wji) {
    const Index i = p / net.n_hidden;
    return i == 0 ? hp.default_group
                  : hp.input_group[static_cast<std::size_t>(i - 1)];
  }
  return hp.default_group;
}

Vector alpha_per_param(const MlpNetwork& net, const ArdHyperparams& hp) {
  Vector ap(n_params(net));
  for (Index p = 0; p < ap.size(); ++p) ap[p] = hp.alphas[param_group(net, hp, p)];
  return ap;
}

struct ForwardPass {
  Matrix hidden;  // n x n_hidden, post-sigmoid
  Vector output;  // n, post-sigmoid
};

ForwardPass run_forward(const MlpNetwork& net, const Matrix& x) {
  ForwardPass fp;
  Matrix pre = (x * net.w_ji.rightCols(net.n_inputs).transpose()).rowwise() +
               net.w_ji.col(0).transpose();
  fp.hidden = pre.unaryExpr([](Real t) { return sigmoid(t); });
  Vector opre = (fp.hidden * net.w_kj.tail(net.n_hidden)).array() + net.w_kj[0];
  fp.output = opre.unaryExpr([](Real t) { return sigmoid(t); });
  return fp;
}

Real loss_and_gradient(const MlpNetwork& net, const Matrix& x,
                       const IntVector& labels, const ArdHyperparams& hp,
                       Vector* grad_out) {
  const Index n = x.rows();
  const Index m = net.n_inputs;
  const Index h = net.n_hidden;

  ForwardPass fp = run_forward(net, x);
  Real ce = 0.0;
  Vector resid(n);
  for (Index r = 0; r < n; ++r) {
    const Real y = static_cast<Real>(labels[r]);
    const Real o = fp.output[r];
    ce -= y * std::log(o) + (1.0 - y) * std::log(1.0 - o);
    resid[r] = o - y;
  }

  const Vector w = flatten(net);
  const Vector ap = alpha_per_param(net, hp);
  const Real penalty = 0.5 * (ap.array() * w.array().square()).sum();

  if (grad_out) {
    Vector gkj(h + 1);
    gkj[0] = resid.sum();
    gkj.tail(h) = fp.hidden.transpose() * resid;

    Matrix delta = (resid * net.w_kj.tail(h).transpose()).array() *
                   (fp.hidden.array() * (1.0 - fp.hidden.array()));
    Matrix gji(h, m + 1);
    gji.col(0) = delta.colwise().sum().transpose();
    gji.rightCols(m) = delta.transpose() * x;

    Vector g(n_params(net));
    g.head(gji.size()) = Eigen::Map<const Vector>(gji.data(), gji.size());
    g.tail(h + 1) = gkj;
    *grad_out = g + (ap.array() * w.array()).matrix();
  }
  return ce + penalty;
}

std::uint64_t fnv1a_mix(std::uint64_t h, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= (v >> (8 * b)) & 0xFF;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t column_fingerprint(const Matrix& z, Index j) {
  std::uint64_t h = 1469598103934665603ULL;
  for (Index r = 0; r < z.rows(); ++r)
    h = fnv1a_mix(h, std::bit_cast<std::uint64_t>(z(r, j)));
  return h;
}

void append_row(std::ostringstream& out, const char* label, const Vector& v) {
  out << label;
  char buf[64];
  for (Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    out << ' ' << buf;
  }
  out << '\n';
}

void expect_token(std::istream& in, const std::string& want) {
  std::string got;
  in >> got;
  if (got != want)
    throw ParseError("parse_ard_model: expected '" + want + "', got '" + got + "'");
}

Vector read_row(std::istream& in, const std::string& label, Index m) {
  expect_token(in, label);
  Vector v(m);
  for (Index i = 0; i < m; ++i)
    if (!(in >> v[i]))
      throw ParseError("parse_ard_model: truncated '" + label + "' row");
  return v;
}

void validate_config(const ArdConfig& cfg) {
  if (cfg.epochs < 1) throw ConfigError("ard: epochs must be >= 1");
  if (cfg.n_hidden < 1) throw ConfigError("ard: n_hidden must be >= 1");
  if (cfg.learning_rate <= 0.0) throw ConfigError("ard: learning_rate must be > 0");
  if (cfg.evidence_cycles < 1) throw ConfigError("ard: evidence_cycles must be >= 1");
  if (cfg.relevance_threshold < 0.0)
    throw ConfigError("ard: relevance_threshold must be >= 0");
  if (cfg.split_groups < 0) throw ConfigError("ard: split_groups must be >= 0");
  if (cfg.init_alpha <= 0.0) throw ConfigError("ard: init_alpha must be > 0");
  if (cfg.init_weight_scale < 0.0)
    throw ConfigError("ard: init_weight_scale must be >= 0");
}

}  // namespace

Index n_params(const MlpNetwork& net) {
  return net.n_hidden * (net.n_inputs + 1) + net.n_hidden + 1;
}

Vector flatten(const MlpNetwork& net) {
  Vector w(n_params(net));
  const Index wji = net.w_ji.size();
  w.head(wji) = Eigen::Map<const Vector>(net.w_ji.data(), wji);
  w.tail(net.w_kj.size()) = net.w_kj;
  return w;
}

void unflatten(const Vector& w, MlpNetwork& net) {
  validate_network(net);
  if (w.size() != n_params(net))
    throw SchemaError("unflatten: parameter vector size mismatch");
  const Index wji = net.w_ji.size();
  Eigen::Map<Vector>(net.w_ji.data(), wji) = w.head(wji);
  net.w_kj = w.tail(net.w_kj.size());
}

ArdHyperparams per_input_hyperparams(Index n_inputs, Real init_alpha) {
  if (n_inputs < 1)
    throw ConfigError("per_input_hyperparams: need at least one input");
  if (init_alpha <= 0.0)
    throw ConfigError("per_input_hyperparams: init_alpha must be > 0");
  ArdHyperparams hp;
  hp.input_group.resize(static_cast<std::size_t>(n_inputs));
  std::iota(hp.input_group.begin(), hp.input_group.end(), 0);
  hp.default_group = static_cast<int>(n_inputs);
  hp.alphas = Vector::Constant(n_inputs + 1, init_alpha);
  return hp;
}

int resolved_split_groups(const ArdConfig& cfg, Index n_inputs) {
  validate_config(cfg);
  const int g = cfg.split_groups > 0 ? cfg.split_groups : (n_inputs > 100 ? 4 : 1);
  return static_cast<int>(std::min<Index>(g, std::max<Index>(n_inputs, 1)));
}

Real resolved_weight_scale(const ArdConfig& cfg, Index n_inputs) {
  validate_config(cfg);
  if (cfg.init_weight_scale > 0.0) return cfg.init_weight_scale;
  return 1.0 / std::sqrt(static_cast<Real>(std::max<Index>(n_inputs, 1)));
}

std::vector<Index> block_sizes(Index n_inputs, int n_blocks) {
  if (n_inputs < 1 || n_blocks < 1 || n_blocks > n_inputs)
    throw ConfigError("block_sizes: need 1 <= n_blocks <= n_inputs");
  std::vector<Index> sizes(static_cast<std::size_t>(n_blocks));
  for (int b = 0; b < n_blocks; ++b)
    sizes[static_cast<std::size_t>(b)] =
        n_inputs / n_blocks + (b < static_cast<int>(n_inputs % n_blocks) ? 1 : 0);
  return sizes;
}

Real forward(const MlpNetwork& net, const Vector& x) {
  validate_network(net);
  if (x.size() != net.n_inputs)
    throw SchemaError("forward: input has " + std::to_string(x.size()) +
                      " entries, network has " + std::to_string(net.n_inputs));
  const Vector pre = net.w_ji.col(0) + net.w_ji.rightCols(net.n_inputs) * x;
  Real acc = net.w_kj[0];
  for (Index j = 0; j < net.n_hidden; ++j) acc += net.w_kj[j + 1] * sigmoid(pre[j]);
  return sigmoid(acc);
}

Real objective(const MlpNetwork& net, const Matrix& x, const IntVector& labels,
               const ArdHyperparams& hp) {
  validate_network(net);
  validate_hyperparams(net, hp);
  validate_data(net, x, labels);
  return loss_and_gradient(net, x, labels, hp, nullptr);
}

Vector gradient(const MlpNetwork& net, const Matrix& x, const IntVector& labels,
                const ArdHyperparams& hp) {
  validate_network(net);
  validate_hyperparams(net, hp);
  validate_data(net, x, labels);
  Vector g;
  loss_and_gradient(net, x, labels, hp, &g);
  return g;
}

MlpNetwork train(MlpNetwork net, const Matrix& x, const IntVector& labels,
                 const ArdHyperparams& hp, const ArdConfig& cfg) {
  validate_network(net);
  validate_hyperparams(net, hp);
  validate_data(net, x, labels);
  validate_config(cfg);

  const Real n = std::max<Real>(1.0, static_cast<Real>(x.rows()));
  const Real step = cfg.learning_rate / n;
  const Vector ap = alpha_per_param(net, hp);
  // The quadratic decay term is handled by its exact shrink factor instead of
  // an explicit gradient step: a ceiling-clamped alpha (1e6) would otherwise
  // turn the iteration into w *= (1 - step*alpha) with |1 - step*alpha| >> 1
  // and diverge no matter how small the weights already are.
  const Vector shrink = (1.0 + step * ap.array()).inverse().matrix();
  Vector g;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const Real f = loss_and_gradient(net, x, labels, hp, &g);
    if (!std::isfinite(f))
      throw NumericError("train: objective diverged at epoch " +
                         std::to_string(epoch));
    const Vector w = flatten(net);
    const Vector data_grad = g - ap.cwiseProduct(w);
    const Vector next = shrink.cwiseProduct(w - step * data_grad);
    unflatten(next, net);
  }
  return net;
}

Real reestimate_alpha(Real gamma, Real sum_w2) {
  if (sum_w2 <= 0.0) return 1e6;
  return std::clamp(gamma / sum_w2, 1e-6, 1e6);
}

ArdHyperparams update_alphas(ArdModel& model, const Matrix& x,
                             const IntVector& labels) {
  const MlpNetwork& net = model.network;
  validate_network(net);
  validate_hyperparams(net, model.hyperparams);
  validate_data(net, x, labels);

  const Index n = x.rows();
  const Index m = net.n_inputs;
  const Index h = net.n_hidden;
  const Index np = n_params(net);

  const ForwardPass fp = run_forward(net, x);
  const Matrix dh = fp.hidden.array() * (1.0 - fp.hidden.array());

  // G(r, p) = d(output pre-activation of row r) / d(parameter p).
  Matrix g(n, np);
  for (Index i = 0; i <= m; ++i) {
    for (Index j = 0; j < h; ++j) {
      if (i == 0)
        g.col(i * h + j) = net.w_kj[j + 1] * dh.col(j);
      else
        g.col(i * h + j) =
            net.w_kj[j + 1] * (dh.col(j).array() * x.col(i - 1).array());
    }
  }
  g.col((m + 1) * h) = Vector::Ones(n);
  for (Index j = 0; j < h; ++j) g.col((m + 1) * h + 1 + j) = fp.hidden.col(j);

  const Vector s = fp.output.array() * (1.0 - fp.output.array());
  Matrix hess = g.transpose() * (g.array().colwise() * s.array()).matrix();
  hess.diagonal() += alpha_per_param(net, model.hyperparams);

  model.hessian_ridged = false;
  Eigen::LLT<Matrix> llt(hess);
  if (llt.info() != Eigen::Success) {
    hess.diagonal().array() += 1e-8;
    model.hessian_ridged = true;
    llt.compute(hess);
    if (llt.info() != Eigen::Success)
      throw NumericError("update_alphas: Hessian stayed indefinite after ridge");
  }
  const Matrix hinv = llt.solve(Matrix::Identity(np, np));
  model.hessian_diag_inverse = hinv.diagonal();

  const int n_groups = static_cast<int>(model.hyperparams.alphas.size());
  Vector dim = Vector::Zero(n_groups);
  Vector trace = Vector::Zero(n_groups);
  Vector sum_w2 = Vector::Zero(n_groups);
  const Vector w = flatten(net);
  for (Index p = 0; p < np; ++p) {
    const int k = param_group(net, model.hyperparams, p);
    dim[k] += 1.0;
    trace[k] += model.hessian_diag_inverse[p];
    sum_w2[k] += w[p] * w[p];
  }

  model.gamma.resize(n_groups);
  ArdHyperparams out = model.hyperparams;
  for (int k = 0; k < n_groups; ++k) {
    const Real gamma =
        std::clamp(dim[k] - model.hyperparams.alphas[k] * trace[k], 0.0, dim[k]);
    model.gamma[k] = gamma;
    out.alphas[k] = reestimate_alpha(gamma, sum_w2[k]);
  }
  return out;
}

ArdSelection select_features(const Dataset& ds, const ArdConfig& cfg) {
  validate_config(cfg);
  if (ds.n_rows() < 1)
    throw DegenerateError("select_features: empty dataset");
  if (ds.n_attrs() < 1)
    throw DegenerateError("select_features: dataset has no attributes");
  if (ds.missing().any())
    throw DegenerateError("select_features: training rows contain missing cells");

  const Index n = ds.n_rows();
  const Index m = ds.n_attrs();
  const ColumnStats stats = standardize_stats(ds);
  Matrix z(n, m);
  for (Index j = 0; j < m; ++j) {
    const Real scale = stats.stddev[j] == 0.0 ? 1.0 : stats.stddev[j];
    z.col(j) = (ds.values().col(j).array() - stats.mean[j]) / scale;
  }

  std::vector<std::uint64_t> fingerprint(static_cast<std::size_t>(m));
  for (Index j = 0; j < m; ++j)
    fingerprint[static_cast<std::size_t>(j)] = column_fingerprint(z, j);

  const int n_blocks = resolved_split_groups(cfg, m);
  const Index h = cfg.n_hidden;

  ArdSelection sel;
  char buf[64];
  const std::vector<Index> sizes = block_sizes(m, n_blocks);
  Index start = 0;
  for (int b = 0; b < n_blocks; ++b) {
    const Index len = sizes[static_cast<std::size_t>(b)];

    // Content-canonical input order: any permutation of the same columns
    // produces the identical training problem, bit for bit.
    std::vector<Index> canon(static_cast<std::size_t>(len));
    std::iota(canon.begin(), canon.end(), Index{0});
    std::stable_sort(canon.begin(), canon.end(), [&](Index a, Index b2) {
      const std::uint64_t fa = fingerprint[static_cast<std::size_t>(start + a)];
      const std::uint64_t fb = fingerprint[static_cast<std::size_t>(start + b2)];
      if (fa != fb) return fa < fb;
      for (Index r = 0; r < n; ++r) {
        const Real va = z(r, start + a), vb = z(r, start + b2);
        if (va != vb) return va < vb;
      }
      return false;
    });

    std::uint64_t block_fp = 1469598103934665603ULL;
    for (Index c = 0; c < len; ++c)
      block_fp = fnv1a_mix(
          block_fp, fingerprint[static_cast<std::size_t>(start + canon[c])]);
    const std::uint64_t block_seed = derive_seed(cfg.seed, block_fp);

    Matrix xb(n, len);
    for (Index c = 0; c < len; ++c) xb.col(c) = z.col(start + canon[c]);

    MlpNetwork net;
    net.n_inputs = len;
    net.n_hidden = h;
    net.w_ji.resize(h, len + 1);
    net.w_kj.resize(h + 1);
    const Real scale = resolved_weight_scale(cfg, len);
    SplitMix64 base_rng(derive_seed(block_seed, 0));
    for (Index j = 0; j < h; ++j) net.w_ji(j, 0) = scale * base_rng.normal();
    for (Index c = 0; c < len; ++c) {
      SplitMix64 col_rng(derive_seed(
          block_seed, fingerprint[static_cast<std::size_t>(start + canon[c])]));
      for (Index j = 0; j < h; ++j)
        net.w_ji(j, c + 1) = scale * col_rng.normal();
    }
    for (Index j = 0; j <= h; ++j) net.w_kj[j] = scale * base_rng.normal();

    ArdModel model;
    model.network = std::move(net);
    model.hyperparams = per_input_hyperparams(len, cfg.init_alpha);

    for (int cycle = 1; cycle <= cfg.evidence_cycles; ++cycle) {
      model.network =
          train(std::move(model.network), xb, ds.labels(), model.hyperparams, cfg);
      const Real f = objective(model.network, xb, ds.labels(), model.hyperparams);
      const ArdHyperparams next = update_alphas(model, xb, ds.labels());

      std::ostringstream line;
      std::snprintf(buf, sizeof buf, "%.6g", f);
      line << "block " << b << " cycle " << cycle << " objective " << buf
           << " alphas";
      for (Index c = 0; c <= len; ++c) {
        std::snprintf(buf, sizeof buf, "%.6g", next.alphas[c]);
        line << ' ' << buf;
      }
      line << " gammas";
      for (Index c = 0; c <= len; ++c) {
        std::snprintf(buf, sizeof buf, "%.6g", model.gamma[c]);
        line << ' ' << buf;
      }
      if (model.hessian_ridged) line << " ridged";
      sel.log.push_back(line.str());

      model.hyperparams = next;
    }

    // Map the canonical arrangement back to block-original input order.
    std::vector<Index> inv(static_cast<std::size_t>(len));
    for (Index c = 0; c < len; ++c) inv[static_cast<std::size_t>(canon[c])] = c;

    ArdModel out;
    out.network.n_inputs = len;
    out.network.n_hidden = h;
    out.network.w_ji.resize(h, len + 1);
    out.network.w_ji.col(0) = model.network.w_ji.col(0);
    for (Index l = 0; l < len; ++l)
      out.network.w_ji.col(l + 1) =
          model.network.w_ji.col(inv[static_cast<std::size_t>(l)] + 1);
    out.network.w_kj = model.network.w_kj;
    out.hyperparams = per_input_hyperparams(len, cfg.init_alpha);
    out.hyperparams.alphas.resize(len + 1);
    out.gamma.resize(len + 1);
    for (Index l = 0; l < len; ++l) {
      out.hyperparams.alphas[l] =
          model.hyperparams.alphas[inv[static_cast<std::size_t>(l)]];
      out.gamma[l] = model.gamma[inv[static_cast<std::size_t>(l)]];
    }
    out.hyperparams.alphas[len] = model.hyperparams.alphas[len];
    out.gamma[len] = model.gamma[len];
    out.hessian_ridged = model.hessian_ridged;
    out.hessian_diag_inverse.resize(n_params(out.network));
    for (Index i = 0; i <= len; ++i) {
      const Index src = i == 0 ? Index{0} : inv[static_cast<std::size_t>(i - 1)] + 1;
      out.hessian_diag_inverse.segment(i * h, h) =
          model.hessian_diag_inverse.segment(src * h, h);
    }
    out.hessian_diag_inverse.tail(h + 1) =
        model.hessian_diag_inverse.tail(h + 1);

    out.relevance.resize(len);
    for (Index l = 0; l < len; ++l)
      out.relevance[l] = std::sqrt(
          out.network.w_ji.col(l + 1).squaredNorm() / static_cast<Real>(h));

    std::vector<Index> kept;
    for (Index l = 0; l < len; ++l)
      if (out.relevance[l] >= cfg.relevance_threshold) kept.push_back(start + l);
    if (kept.empty()) {
      Index best = 0;
      for (Index l = 1; l < len; ++l)
        if (out.relevance[l] > out.relevance[best]) best = l;
      kept.push_back(start + best);
      sel.guard_triggered = true;
      sel.log.push_back("block " + std::to_string(b) +
                        " guard: no input reached the relevance threshold, "
                        "kept attribute " + std::to_string(start + best));
    }
    sel.retained.insert(sel.retained.end(), kept.begin(), kept.end());
    sel.blocks.push_back(std::move(out));

    start += len;
  }
  return sel;
}

std::string format_ard_model(const ArdModel& model) {
  std::ostringstream out;
  out << "inputs " << model.network.n_inputs << " hidden "
      << model.network.n_hidden << '\n';
  for (Index i = 0; i <= model.network.n_inputs; ++i)
    append_row(out, "wji", model.network.w_ji.col(i));
  append_row(out, "wkj", model.network.w_kj);
  out << "groups";
  for (int g : model.hyperparams.input_group) out << ' ' << g;
  out << " default " << model.hyperparams.default_group << '\n';
  append_row(out, "alphas", model.hyperparams.alphas);
  append_row(out, "relevance", model.relevance);
  Vector gamma = model.gamma;
  if (gamma.size() == 0) gamma = Vector::Zero(model.hyperparams.alphas.size());
  append_row(out, "gamma", gamma);
  out << "ridged " << (model.hessian_ridged ? 1 : 0) << '\n';
  return out.str();
}

ArdModel parse_ard_model(const std::string& text) {
  std::istringstream in(text);
  ArdModel model;
  expect_token(in, "inputs");
  if (!(in >> model.network.n_inputs))
    throw ParseError("parse_ard_model: bad input count");
  expect_token(in, "hidden");
  if (!(in >> model.network.n_hidden))
    throw ParseError("parse_ard_model: bad hidden count");
  const Index m = model.network.n_inputs;
  const Index h = model.network.n_hidden;
  if (m < 1 || h < 1) throw ParseError("parse_ard_model: bad layer sizes");

  model.network.w_ji.resize(h, m + 1);
  for (Index i = 0; i <= m; ++i)
    model.network.w_ji.col(i) = read_row(in, "wji", h);
  model.network.w_kj = read_row(in, "wkj", h + 1);

  expect_token(in, "groups");
  model.hyperparams.input_group.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i)
    if (!(in >> model.hyperparams.input_group[static_cast<std::size_t>(i)]))
      throw ParseError("parse_ard_model: truncated groups row");
  expect_token(in, "default");
  if (!(in >> model.hyperparams.default_group))
    throw ParseError("parse_ard_model: bad default group");

  int n_groups = model.hyperparams.default_group;
  for (int g : model.hyperparams.input_group) n_groups = std::max(n_groups, g);
  ++n_groups;
  model.hyperparams.alphas = read_row(in, "alphas", n_groups);
  model.relevance = read_row(in, "relevance", m);
  model.gamma = read_row(in, "gamma", n_groups);
  expect_token(in, "ridged");
  int ridged = 0;
  if (!(in >> ridged)) throw ParseError("parse_ard_model: bad ridged flag");
  model.hessian_ridged = ridged != 0;
  validate_hyperparams(model.network, model.hyperparams);
  return model;
}

}  // namespace ripsel
