#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cflow {

/// Piecewise linear function of time given by breakpoints (t_k, v_k) with
/// non-decreasing t_k. A repeated abscissa encodes a jump; the value at the
/// jump is the left limit. Constant extrapolation outside the table.
class Schedule {
public:
    Schedule() = default;
    explicit Schedule(double constant) : points_{{0.0, constant}} {}
    explicit Schedule(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
        for (std::size_t k = 1; k < points_.size(); ++k) {
            if (points_[k].first < points_[k - 1].first) {
                throw std::invalid_argument("schedule breakpoints must be non-decreasing in time");
            }
        }
    }

    /// Parses "t0 v0; t1 v1; ..." or a single number.
    static Schedule parse(const std::string& text) {
        std::vector<std::pair<double, double>> pts;
        std::stringstream all(text);
        std::string item;
        while (std::getline(all, item, ';')) {
            std::istringstream in(item);
            double a = 0.0;
            if (!(in >> a)) {
                if (item.find_first_not_of(" \t") == std::string::npos) continue;
                throw std::invalid_argument("bad schedule entry '" + item + "'");
            }
            double b = 0.0;
            if (in >> b) {
                pts.emplace_back(a, b);
            } else if (pts.empty() && text.find(';') == std::string::npos) {
                return Schedule(a);
            } else {
                throw std::invalid_argument("schedule entry needs 'time value': '" + item + "'");
            }
            std::string rest;
            if (in >> rest) throw std::invalid_argument("trailing text in schedule entry '" + item + "'");
        }
        if (pts.empty()) throw std::invalid_argument("empty schedule");
        return Schedule(std::move(pts));
    }

    double operator()(double t) const {
        if (points_.empty()) return 0.0;
        if (t <= points_.front().first) return points_.front().second;
        for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
            const auto& [t0, v0] = points_[k];
            const auto& [t1, v1] = points_[k + 1];
            if (t <= t1) {
                if (t1 == t0) return v0;
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
            }
        }
        return points_.back().second;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& p : points_) m = std::max(m, std::abs(p.second));
        return m;
    }

    const std::vector<std::pair<double, double>>& points() const { return points_; }

    std::string to_string() const {
        std::ostringstream out;
        out.precision(17);
        for (std::size_t k = 0; k < points_.size(); ++k) {
            if (k) out << "; ";
            out << points_[k].first << ' ' << points_[k].second;
        }
        return out.str();
    }

private:
    std::vector<std::pair<double, double>> points_;
};

}  // namespace cflow
