#include "mrfuzzy/dataset.hpp"

#include <array>

namespace mrfuzzy {

namespace {

// factor1, factor2, precipitation (mm); years 1952..1977 in order.
constexpr std::array<std::array<double, 3>, 26> kPrecipitation{{
    {0.73, -5.28, 283},
    {-2.08, 5.18, 647},
    {-3.53, 10.23, 731},
    {-3.31, 4.21, 561},
    {0.53, -2.46, 467},
    {2.33, 7.32, 399},
    {-0.32, -10.81, 315},
    {-2.35, 3.85, 521},
    {-0.95, 2.74, 472},
    {-0.64, 6.0, 536},
    {0.92, 0.65, 385},
    {2.98, -11.83, 259},
    {-0.85, -2.3, 657},
    {0.46, -14.68, 348},
    {-2.31, -1.36, 644},
    {0.2, -5.43, 431},
    {3.46, -19.85, 179},
    {0.08, 8.59, 615},
    {1.46, 7.26, 433},
    {0.24, -1.1, 401},
    {0.89, -16.94, 206},
    {-0.5, 10.46, 639},
    {2.15, -10.06, 418},
    {-0.89, 12.11, 570},
    {1.4, -6.26, 415},
    {-0.59, 7.15, 796},
}};

// factor1, factor2, factor3, situation value.
constexpr std::array<std::array<double, 4>, 60> kSecurity{{
    {1, 2, 7, 13.792},
    {1, 6, 9, 14.783},
    {5, 1, 9, 37.333},
    {5, 2, 9, 37.748},
    {7, 6, 8, 62.803},
    {4, 2, 1, 29.414},
    {8, 6, 6, 77.858},
    {6, 9, 3, 50.577},
    {4, 2, 6, 28.822},
    {5, 2, 1, 38.414},
    {1, 1, 4, 13.5},
    {3, 4, 7, 22.378},
    {1, 5, 2, 14.943},
    {1, 8, 9, 15.162},
    {9, 1, 1, 94},
    {9, 3, 7, 94.11},
    {3, 9, 9, 23.333},
    {4, 7, 5, 30.093},
    {3, 4, 9, 22.333},
    {5, 7, 1, 39.646},
    {4, 7, 7, 30.024},
    {7, 8, 9, 63.162},
    {2, 4, 4, 17.5},
    {1, 8, 4, 15.328},
    {6, 7, 1, 50.646},
    {4, 1, 1, 29},
    {9, 4, 1, 95},
    {6, 2, 1, 49.414},
    {3, 1, 8, 21.354},
    {5, 4, 5, 38.447},
    {2, 1, 8, 16.354},
    {9, 4, 2, 94.707},
    {8, 4, 8, 77.354},
    {6, 2, 3, 48.992},
    {8, 3, 7, 77.11},
    {6, 4, 5, 49.447},
    {9, 4, 6, 94.408},
    {4, 1, 6, 28.408},
    {4, 8, 4, 30.328},
    {2, 6, 7, 17.827},
    {2, 4, 9, 17.333},
    {1, 3, 7, 14.11},
    {5, 6, 7, 38.827},
    {2, 7, 8, 17.999},
    {7, 8, 6, 63.237},
    {4, 9, 6, 30.408},
    {1, 4, 6, 14.408},
    {3, 9, 1, 24},
    {3, 7, 6, 23.054},
    {1, 7, 3, 15.223},
    {1, 1, 1, 14},
    {5, 7, 7, 39.024},
    {8, 1, 7, 76.378},
    {4, 6, 8, 29.803},
    {2, 4, 7, 17.378},
    {7, 4, 8, 62.354},
    {1, 4, 1, 15},
    {6, 6, 5, 49.897},
    {4, 1, 9, 28.333},
    {3, 2, 4, 21.914},
}};

template <std::size_t Cols, std::size_t Rows>
Dataset from_table(const std::array<std::array<double, Cols>, Rows>& table, std::vector<std::string> names,
                   std::string target) {
  std::vector<double> inputs;
  std::vector<double> targets;
  inputs.reserve(Rows * (Cols - 1));
  targets.reserve(Rows);
  for (const auto& row : table) {
    inputs.insert(inputs.end(), row.begin(), row.end() - 1);
    targets.push_back(row.back());
  }
  return Dataset(std::move(names), std::move(target), std::move(inputs), std::move(targets));
}

}  // namespace

Dataset precipitation_fixture() {
  return from_table(kPrecipitation, {"factor1", "factor2"}, "precipitation_mm");
}

Dataset security_fixture() {
  return from_table(kSecurity, {"factor1", "factor2", "factor3"}, "situation");
}

}  // namespace mrfuzzy
