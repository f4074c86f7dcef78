#include "coassoc/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "coassoc/errors.hpp"

namespace coassoc {

namespace {

int binom_table[8][8];
bool tables_ready = false;

void init_tables() {
  if (tables_ready) return;
  for (int n = 0; n < 8; ++n) {
    binom_table[n][0] = 1;
    for (int k = 1; k <= n; ++k)
      binom_table[n][k] = binom_table[n - 1][k - 1] + (k <= n - 1 ? binom_table[n - 1][k] : 0);
    for (int k = n + 1; k < 8; ++k) binom_table[n][k] = 0;
  }
  tables_ready = true;
}

// Sorts idx[0..k) in place, returns permutation sign; 0 on repeated index.
int sort_sign(int* idx, int k) {
  int sign = 1;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k - 1 - i; ++j) {
      if (idx[j] == idx[j + 1]) return 0;
      if (idx[j] > idx[j + 1]) {
        std::swap(idx[j], idx[j + 1]);
        sign = -sign;
      }
    }
  return sign;
}

double small_det(const double* m, int k) {
  // column-major k x k with stride k
  switch (k) {
    case 0: return 1.0;
    case 1: return m[0];
    case 2: return m[0] * m[3] - m[2] * m[1];
    case 3:
      return m[0] * (m[4] * m[8] - m[7] * m[5]) - m[3] * (m[1] * m[8] - m[7] * m[2]) +
             m[6] * (m[1] * m[5] - m[4] * m[2]);
    default: {
      Eigen::MatrixXd M = Eigen::Map<const Eigen::MatrixXd>(m, k, k);
      return M.determinant();
    }
  }
}

}  // namespace

AltForm::AltForm(int degree) : degree_(degree) {
  init_tables();
  if (degree < 0 || degree > 7) throw DomainError("AltForm degree out of range");
  c_.assign(binom_table[7][degree], 0.0);
}

int AltForm::binom(int n, int k) {
  init_tables();
  if (k < 0 || k > n) return 0;
  return binom_table[n][k];
}

const std::vector<std::array<int, 7>>& AltForm::combos(int k) {
  init_tables();
  static std::vector<std::vector<std::array<int, 7>>> all = [] {
    std::vector<std::vector<std::array<int, 7>>> out(8);
    for (int deg = 0; deg <= 7; ++deg) {
      std::array<int, 7> idx{};
      idx.fill(-1);
      if (deg == 0) {
        out[deg].push_back(idx);
        continue;
      }
      std::vector<int> cur(deg);
      for (int i = 0; i < deg; ++i) cur[i] = i;
      while (true) {
        idx.fill(-1);
        for (int i = 0; i < deg; ++i) idx[i] = cur[i];
        out[deg].push_back(idx);
        int i = deg - 1;
        while (i >= 0 && cur[i] == 7 - deg + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < deg; ++j) cur[j] = cur[j - 1] + 1;
      }
    }
    return out;
  }();
  return all[k];
}

int AltForm::rank_of(int k, const int* idx) {
  // combinatorial ranking of a strictly increasing index tuple
  init_tables();
  int r = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < idx[i]; ++v) r += binom_table[7 - 1 - v][k - 1 - i];
    prev = idx[i];
  }
  return r;
}

double AltForm::coeff(std::initializer_list<int> idx) const {
  int buf[7];
  int k = 0;
  for (int v : idx) buf[k++] = v;
  if (k != degree_) throw DomainError("coeff: arity mismatch");
  int s = sort_sign(buf, k);
  if (s == 0) return 0.0;
  return s * c_[rank_of(k, buf)];
}

void AltForm::add(std::initializer_list<int> idx, double v) {
  int buf[7];
  int k = 0;
  for (int x : idx) buf[k++] = x;
  if (k != degree_) throw DomainError("add: arity mismatch");
  int s = sort_sign(buf, k);
  if (s == 0) return;
  c_[rank_of(k, buf)] += s * v;
}

double AltForm::eval(std::span<const Vec7> vectors) const {
  const int k = degree_;
  if (static_cast<int>(vectors.size()) != k) throw DomainError("eval: arity mismatch");
  const auto& cb = combos(k);
  double total = 0.0;
  double m[49];
  for (size_t r = 0; r < cb.size(); ++r) {
    if (c_[r] == 0.0) continue;
    for (int col = 0; col < k; ++col)
      for (int row = 0; row < k; ++row) m[col * k + row] = vectors[col](cb[r][row]);
    total += c_[r] * small_det(m, k);
  }
  return total;
}

double AltForm::eval3(const Vec7& a, const Vec7& b, const Vec7& c) const {
  const Vec7 v[3] = {a, b, c};
  return eval(std::span<const Vec7>(v, 3));
}

AltForm AltForm::wedge(const AltForm& other) const {
  const int k = degree_, l = other.degree_;
  if (k + l > 7) throw DomainError("wedge: degree overflow");
  AltForm out(k + l);
  const auto& ci = combos(k);
  const auto& cj = combos(l);
  int buf[7];
  for (size_t i = 0; i < ci.size(); ++i) {
    if (c_[i] == 0.0) continue;
    for (size_t j = 0; j < cj.size(); ++j) {
      if (other.c_[j] == 0.0) continue;
      for (int t = 0; t < k; ++t) buf[t] = ci[i][t];
      for (int t = 0; t < l; ++t) buf[k + t] = cj[j][t];
      int s = sort_sign(buf, k + l);
      if (s == 0) continue;
      out.c_[rank_of(k + l, buf)] += s * c_[i] * other.c_[j];
    }
  }
  return out;
}

AltForm AltForm::interior(const Vec7& v) const {
  if (degree_ == 0) throw DomainError("interior: degree 0");
  AltForm out(degree_ - 1);
  const auto& cb = combos(degree_);
  int buf[7];
  for (size_t r = 0; r < cb.size(); ++r) {
    if (c_[r] == 0.0) continue;
    for (int pos = 0; pos < degree_; ++pos) {
      double vi = v(cb[r][pos]);
      if (vi == 0.0) continue;
      int t = 0;
      for (int q = 0; q < degree_; ++q)
        if (q != pos) buf[t++] = cb[r][q];
      double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      out.c_[rank_of(degree_ - 1, buf)] += sign * vi * c_[r];
    }
  }
  return out;
}

double AltForm::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

AltForm& AltForm::operator+=(const AltForm& o) {
  if (o.degree_ != degree_) throw DomainError("+=: degree mismatch");
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

AltForm& AltForm::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

AltForm hodge_star_diag(const AltForm& a, const std::array<double, 7>& g) {
  const int k = a.degree();
  double detg = 1.0;
  for (double v : g) detg *= v;
  const double sq = std::sqrt(detg);
  AltForm out(7 - k);
  const auto& cb = AltForm::combos(k);
  int comp[7], merged[7];
  for (size_t r = 0; r < cb.size(); ++r) {
    if (a[static_cast<int>(r)] == 0.0) continue;
    bool used[7] = {false, false, false, false, false, false, false};
    double raise = 1.0;
    for (int t = 0; t < k; ++t) {
      used[cb[r][t]] = true;
      raise /= g[cb[r][t]];
    }
    int nc = 0;
    for (int v = 0; v < 7; ++v)
      if (!used[v]) comp[nc++] = v;
    // sign of the permutation (I, I^c) of (0..6)
    int m = 0;
    for (int t = 0; t < k; ++t) merged[m++] = cb[r][t];
    for (int t = 0; t < 7 - k; ++t) merged[m++] = comp[t];
    int inv = 0;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j)
        if (merged[i] > merged[j]) ++inv;
    double sign = (inv % 2 == 0) ? 1.0 : -1.0;
    out[AltForm::rank_of(7 - k, comp)] += sign * sq * raise * a[static_cast<int>(r)];
  }
  return out;
}

AltForm change_covector_basis(const AltForm& a, const Mat7& L) {
  const int k = a.degree();
  AltForm out(k);
  const auto& cb = AltForm::combos(k);
  double m[49];
  for (size_t i = 0; i < cb.size(); ++i) {
    if (a[static_cast<int>(i)] == 0.0) continue;
    for (size_t j = 0; j < cb.size(); ++j) {
      for (int col = 0; col < k; ++col)
        for (int row = 0; row < k; ++row) m[col * k + row] = L(cb[i][row], cb[j][col]);
      double d = small_det(m, k);
      if (d != 0.0) out[static_cast<int>(j)] += a[static_cast<int>(i)] * d;
    }
  }
  return out;
}

double form_norm_sq_diag(const AltForm& a, const std::array<double, 7>& g) {
  const auto& cb = AltForm::combos(a.degree());
  double total = 0.0;
  for (size_t r = 0; r < cb.size(); ++r) {
    double v = a[static_cast<int>(r)];
    if (v == 0.0) continue;
    double w = 1.0;
    for (int t = 0; t < a.degree(); ++t) w /= g[cb[r][t]];
    total += v * v * w;
  }
  return total;
}

}  // namespace coassoc
