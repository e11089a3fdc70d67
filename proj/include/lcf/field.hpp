#ifndef LCF_FIELD_HPP_
#define LCF_FIELD_HPP_

#include <cstddef>
#include <vector>

namespace lcf {

// Cell-centered scalar samples, x-fastest storage: (*this)(i,j) = data[j*nx+i],
// cell center at ((i+1/2)dx, (j+1/2)dy).
struct ScalarField {
  int nx = 0, ny = 0;
  std::vector<double> data;

  ScalarField() = default;
  ScalarField(int nx_, int ny_) : nx(nx_), ny(ny_), data(size_t(nx_) * ny_, 0.0) {}

  double& operator()(int i, int j) { return data[size_t(j) * nx + i]; }
  double operator()(int i, int j) const { return data[size_t(j) * nx + i]; }
  size_t size() const { return data.size(); }
};

// Cell-centered 3-vector samples (director and director-like fields), AoS.
struct VectorField3 {
  int nx = 0, ny = 0;
  std::vector<double> data;  // (j*nx+i)*3 + c

  VectorField3() = default;
  VectorField3(int nx_, int ny_) : nx(nx_), ny(ny_), data(size_t(nx_) * ny_ * 3, 0.0) {}

  double* at(int i, int j) { return &data[(size_t(j) * nx + i) * 3]; }
  const double* at(int i, int j) const { return &data[(size_t(j) * nx + i) * 3]; }
  double& operator()(int i, int j, int c) { return data[(size_t(j) * nx + i) * 3 + c]; }
  double operator()(int i, int j, int c) const { return data[(size_t(j) * nx + i) * 3 + c]; }
  size_t cells() const { return size_t(nx) * ny; }
};

// MAC staggered velocity. x-component on vertical faces (i*dx, (j+1/2)dy),
// i = 0..nx, j = 0..ny-1; y-component on horizontal faces ((i+1/2)dx, j*dy),
// i = 0..nx-1, j = 0..ny. Boundary-normal faces carry the no-slip value 0.
struct VectorField2 {
  int nx = 0, ny = 0;
  std::vector<double> ux;  // (nx+1) * ny, x-fastest: ux[j*(nx+1)+i]
  std::vector<double> uy;  // nx * (ny+1)

  VectorField2() = default;
  VectorField2(int nx_, int ny_)
      : nx(nx_), ny(ny_),
        ux(size_t(nx_ + 1) * ny_, 0.0),
        uy(size_t(nx_) * (ny_ + 1), 0.0) {}

  double& x(int i, int j) { return ux[size_t(j) * (nx + 1) + i]; }
  double x(int i, int j) const { return ux[size_t(j) * (nx + 1) + i]; }
  double& y(int i, int j) { return uy[size_t(j) * nx + i]; }
  double y(int i, int j) const { return uy[size_t(j) * nx + i]; }
};

}  // namespace lcf

#endif
