#include "lcf/chart.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "lcf/errors.hpp"

namespace lcf {

void chart_forward(const double h[3], double z[2]) {
  const double denom = 1.0 + h[2];
  if (denom < 1e-14)
    throw SouthPole("chart: evaluated at the south pole");
  z[0] = h[0] / denom;
  z[1] = h[1] / denom;
}

void chart_inverse(const double z[2], double h[3]) {
  const double s = z[0] * z[0] + z[1] * z[1];
  const double inv = 1.0 / (1.0 + s);
  h[0] = 2.0 * z[0] * inv;
  h[1] = 2.0 * z[1] * inv;
  h[2] = (1.0 - s) * inv;
}

void chart_inverse_jacobian(const double z[2], double J[3][2]) {
  const double s = z[0] * z[0] + z[1] * z[1];
  const double D = 1.0 + s;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      J[r][c] = (2.0 / D) * ((r == c ? 1.0 : 0.0) - 2.0 * z[r] * z[c] / D);
  J[2][0] = -4.0 * z[0] / (D * D);
  J[2][1] = -4.0 * z[1] / (D * D);
}

void sphere_exp(const double h[3], const double xi[3], double out[3]) {
  const double norm = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  if (norm < 1e-14) {
    out[0] = h[0]; out[1] = h[1]; out[2] = h[2];
    return;
  }
  const double c = std::cos(norm), s = std::sin(norm) / norm;
  for (int k = 0; k < 3; ++k) out[k] = c * h[k] + s * xi[k];
}

ChartControl to_chart(const DirectorBC& h) {
  ChartControl z(h.m, h.nlevels);
  for (int n = 0; n < h.nlevels; ++n)
    for (int j = 0; j < h.m; ++j) chart_forward(h.at(j, n), z.at(j, n));
  return z;
}

DirectorBC from_chart(const ChartControl& z) {
  DirectorBC h(z.m, z.nlevels);
  for (int n = 0; n < z.nlevels; ++n)
    for (int j = 0; j < z.m; ++j) chart_inverse(z.at(j, n), h.at(j, n));
  return h;
}

namespace {

// Direct DFT of the reflected chart trajectory; sizes stay desk-scale so the
// quadratic cost of the transform is immaterial.
double u_norm_sq(const ChartControl& zc) {
  using cplx = std::complex<double>;
  const int M = zc.m;
  const int N = zc.nlevels - 1;
  const int P = (N == 0) ? 1 : 2 * N;  // even reflection period

  auto refl = [&](int p) { return (p <= N) ? p : 2 * N - p; };

  double total = 0.0;
  for (int comp = 0; comp < 2; ++comp) {
    // time transform per arclength sample
    std::vector<cplx> zt(size_t(M) * P);
    for (int j = 0; j < M; ++j)
      for (int q = 0; q < P; ++q) {
        cplx acc(0.0, 0.0);
        for (int p = 0; p < P; ++p) {
          const double ang = -2.0 * M_PI * double(p) * double(q) / double(P);
          acc += zc.at(j, refl(p))[comp] * cplx(std::cos(ang), std::sin(ang));
        }
        zt[size_t(j) * P + q] = acc;
      }
    // arclength transform per time frequency, then weight
    for (int q = 0; q < P; ++q) {
      const int qs = (q <= P / 2) ? q : q - P;
      for (int k = 0; k < M; ++k) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < M; ++j) {
          const double ang = -2.0 * M_PI * double(j) * double(k) / double(M);
          acc += zt[size_t(j) * P + q] * cplx(std::cos(ang), std::sin(ang));
        }
        acc /= double(M) * double(P);
        const int ks = (k <= M / 2) ? k : k - M;
        const double k2 = 1.0 + double(ks) * double(ks);
        const double q2 = 1.0 + double(qs) * double(qs);
        const double w = std::pow(k2, 2.5) + std::pow(q2, 1.25) +
                         q2 * std::pow(k2, 1.5);
        total += w * std::norm(acc);
      }
    }
  }
  return total;
}

}  // namespace

double discrete_U_norm(const ChartControl& z) { return std::sqrt(u_norm_sq(z)); }

ChartControl project_feasible(const ChartControl& z, double M, int* clip_count) {
  if (clip_count) *clip_count = 0;

  ChartControl base(z.m, z.nlevels);
  for (int n = 0; n < z.nlevels; ++n)
    for (int j = 0; j < z.m; ++j) {
      base.at(j, n)[0] = z.at(j, 0)[0];
      base.at(j, n)[1] = z.at(j, 0)[1];
    }
  const double a = u_norm_sq(base);
  if (a > M * M * (1.0 + 1e-12))
    throw InfeasibleBase("project: time-level-0 row alone has norm " +
                         std::to_string(std::sqrt(a)) + " > M");

  ChartControl out = z;
  const double nsq = u_norm_sq(z);
  if (nsq > M * M) {
    // z = base + v with v vanishing at level 0; ||base + g*v||^2 is quadratic
    // in g, solve for the factor reaching exactly M.
    ChartControl v(z.m, z.nlevels);
    for (size_t q = 0; q < v.z.size(); ++q) v.z[q] = z.z[q] - base.z[q];
    const double c = u_norm_sq(v);
    if (c > 0.0) {
      const double b = 0.5 * (nsq - a - c);  // cross term of the quadratic form
      const double disc = b * b + c * (M * M - a);
      const double gamma = (-b + std::sqrt(std::max(disc, 0.0))) / c;
      for (size_t q = 0; q < out.z.size(); ++q)
        out.z[q] = base.z[q] + gamma * v.z[q];
    }
  }
  for (int n = 0; n < out.nlevels; ++n)
    for (int j = 0; j < out.m; ++j) {
      double* p = out.at(j, n);
      const double r = std::hypot(p[0], p[1]);
      if (r > 1.0) {
        p[0] /= r;
        p[1] /= r;
        if (clip_count) ++(*clip_count);
      }
    }
  return out;
}

DirectorBC chart_segment(const DirectorBC& a, const DirectorBC& b, double s) {
  if (a.m != b.m || a.nlevels != b.nlevels)
    throw InvalidParameter("chart_segment: control shapes differ");
  DirectorBC out(a.m, a.nlevels);
  for (int n = 0; n < a.nlevels; ++n)
    for (int j = 0; j < a.m; ++j) {
      double za[2], zb[2], zm[2];
      chart_forward(a.at(j, n), za);
      chart_forward(b.at(j, n), zb);
      zm[0] = s * za[0] + (1.0 - s) * zb[0];
      zm[1] = s * za[1] + (1.0 - s) * zb[1];
      chart_inverse(zm, out.at(j, n));
    }
  return out;
}

TangentBoundarySection build_tangent_from_chart(const DirectorBC& h,
                                                const ChartControl& dz) {
  if (h.m != dz.m || h.nlevels != dz.nlevels)
    throw InvalidParameter("tangent: chart perturbation shape mismatch");
  for (int j = 0; j < dz.m; ++j)
    if (dz.at(j, 0)[0] != 0.0 || dz.at(j, 0)[1] != 0.0)
      throw InvalidParameter("tangent: perturbation nonzero at time level 0");

  TangentBoundarySection xi(h.m, h.nlevels);
  for (int n = 0; n < h.nlevels; ++n)
    for (int j = 0; j < h.m; ++j) {
      double z[2], J[3][2];
      chart_forward(h.at(j, n), z);
      chart_inverse_jacobian(z, J);
      const double* v = dz.at(j, n);
      double* x = xi.at(j, n);
      for (int r = 0; r < 3; ++r) x[r] = J[r][0] * v[0] + J[r][1] * v[1];
    }
  return xi;
}

}  // namespace lcf
