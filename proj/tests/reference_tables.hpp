#pragma once

// Reference L2 errors and convergence rates for the manufactured problems,
// used by the harness tests and the acceptance suite. Layout per entry:
// errors by mesh, then the printed rates between consecutive meshes.

namespace ref {

struct Series1D {
  double alpha;
  double e1[4];
  double r1[3];
  double e2[4];
  double r2[3];
};

// k = 1, meshes 1/h = 8, 16, 32, 64
inline constexpr Series1D kTable1[] = {
    {1.1,
     {3.860e-4, 7.364e-5, 1.366e-5, 2.880e-6},
     {2.3901, 2.4308, 2.2457},
     {3.852e-4, 7.371e-5, 1.367e-5, 2.880e-6},
     {2.3856, 2.4311, 2.2464}},
    {1.5,
     {2.259e-4, 5.352e-5, 1.223e-5, 2.852e-6},
     {2.0774, 2.1301, 2.0999},
     {2.276e-4, 5.418e-5, 1.228e-5, 2.855e-6},
     {2.0705, 2.1416, 2.1044}},
    {1.9,
     {2.483e-4, 5.896e-5, 1.442e-5, 3.526e-6},
     {2.0744, 2.0320, 2.0319},
     {2.511e-4, 6.038e-5, 1.452e-5, 3.530e-6},
     {2.0561, 2.0565, 2.0399}},
};
inline constexpr int kTable1Mesh[4] = {8, 16, 32, 64};

// k = 2, meshes 1/h = 4, 8, 16, 32
inline constexpr Series1D kTable2[] = {
    {1.1,
     {8.821e-4, 5.884e-5, 1.240e-5, 1.866e-6},
     {3.9062, 2.2468, 2.7319},
     {8.832e-4, 5.874e-5, 1.239e-5, 1.865e-6},
     {3.9102, 2.2454, 2.7314}},
    {1.5,
     {4.765e-4, 3.675e-5, 5.296e-6, 7.023e-7},
     {3.6969, 2.7947, 2.9148},
     {4.785e-4, 3.651e-5, 5.279e-6, 7.014e-7},
     {3.7122, 2.7899, 2.9120}},
    {1.9,
     {2.729e-4, 2.831e-5, 3.343e-6, 3.844e-7},
     {3.2693, 3.0818, 3.1205},
     {2.766e-4, 2.786e-5, 3.301e-6, 3.816e-7},
     {3.3114, 3.0773, 3.1127}},
};
inline constexpr int kTable2Mesh[4] = {4, 8, 16, 32};

// 2D, k = 1, meshes 1/h = 4, 8, 12, 16 (non-doubling sequence)
inline constexpr Series1D kTable3[] = {
    {1.1,
     {2.190e-2, 7.518e-3, 2.751e-3, 1.417e-3},
     {1.5423, 2.4794, 2.3064},
     {2.162e-2, 7.495e-3, 2.743e-3, 1.416e-3},
     {1.5282, 2.4794, 2.2971}},
    {1.5,
     {1.675e-2, 5.516e-3, 2.377e-3, 1.249e-3},
     {1.6026, 2.0759, 2.2378},
     {1.610e-2, 5.490e-3, 2.373e-3, 1.248e-3},
     {1.5522, 2.0683, 2.2348}},
    {1.9,
     {1.483e-2, 5.475e-3, 2.692e-3, 1.560e-3},
     {1.4379, 1.7506, 1.8973},
     {1.391e-2, 5.453e-3, 2.690e-3, 1.559e-3},
     {1.3512, 1.7428, 1.8953}},
};
inline constexpr int kTable3Mesh[4] = {4, 8, 12, 16};

}  // namespace ref
