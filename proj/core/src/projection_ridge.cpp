#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "camp/projection.hpp"

namespace camp {

double RidgeModel::decision(std::span<const double> x) const {
    if (x.size() != coefficients.size()) {
        throw ValidationError("ridge: expected " + std::to_string(coefficients.size()) + " features, got " +
                              std::to_string(x.size()));
    }
    const auto z = scaler.apply(x);
    double s = intercept_standardized;
    for (std::size_t j = 0; j < z.size(); ++j) s += weights[j] * z[j];
    return s;
}

double RidgeModel::predict(std::span<const double> x) const { return std::max(0.0, decision(x)); }

RidgeModel ridge_fit(std::span<const std::vector<double>> x, std::span<const double> y, double lambda) {
    if (x.size() != y.size()) throw ValidationError("ridge_fit: x and y lengths differ");
    if (x.size() < 2) throw ValidationError("ridge_fit: need at least 2 examples");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("ridge_fit: lambda must be >= 0");
    const std::size_t n = x.size();
    const std::size_t p = x.front().size();

    RidgeModel m;
    m.lambda = lambda;
    m.scaler.mean.assign(p, 0.0);
    m.scaler.scale.assign(p, 1.0);
    for (const auto& r : x) {
        if (r.size() != p) throw ValidationError("ridge_fit: ragged feature rows");
        for (std::size_t j = 0; j < p; ++j) m.scaler.mean[j] += r[j];
    }
    for (auto& v : m.scaler.mean) v /= static_cast<double>(n);
    std::vector<double> var(p, 0.0);
    for (const auto& r : x)
        for (std::size_t j = 0; j < p; ++j) var[j] += (r[j] - m.scaler.mean[j]) * (r[j] - m.scaler.mean[j]);
    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < p; ++j) {
        const double sd = std::sqrt(var[j] / static_cast<double>(n));
        if (sd > 1e-12 * std::max(1.0, std::abs(m.scaler.mean[j]))) {
            m.scaler.scale[j] = sd;
            active.push_back(j);
        }
    }

    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);

    const auto q = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), q);
    Eigen::VectorXd yc(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index a = 0; a < q; ++a) {
            const auto j = active[static_cast<std::size_t>(a)];
            z(static_cast<Eigen::Index>(i), a) = (x[i][j] - m.scaler.mean[j]) / m.scaler.scale[j];
        }
        yc(static_cast<Eigen::Index>(i)) = y[i] - ybar;
    }

    Eigen::VectorXd w = Eigen::VectorXd::Zero(q);
    if (q > 0) {
        Eigen::MatrixXd g = z.transpose() * z;
        g.diagonal().array() += lambda;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        if (!(lo > 1e-10 * hi)) {
            throw ValidationError("ridge_fit: normal equations are singular (collinear features)" +
                                  std::string(lambda == 0.0 ? "; use lambda > 0" : ""));
        }
        const Eigen::LLT<Eigen::MatrixXd> llt(g);
        w = llt.solve(z.transpose() * yc);
    }

    m.weights.assign(p, 0.0);
    m.coefficients.assign(p, 0.0);
    m.intercept_standardized = ybar;
    m.intercept = ybar;
    for (Eigen::Index a = 0; a < q; ++a) {
        const auto j = active[static_cast<std::size_t>(a)];
        m.weights[j] = w(a);
        m.coefficients[j] = w(a) / m.scaler.scale[j];
        m.intercept -= m.coefficients[j] * m.scaler.mean[j];
    }
    return m;
}

void to_json(nlohmann::json& j, const RidgeModel& m) {
    j = nlohmann::json{{"lambda", m.lambda},
                       {"scaler", {{"mean", m.scaler.mean}, {"scale", m.scaler.scale}}},
                       {"weights", m.weights},
                       {"intercept_standardized", m.intercept_standardized},
                       {"coefficients", m.coefficients},
                       {"intercept", m.intercept}};
}

void from_json(const nlohmann::json& j, RidgeModel& m) {
    try {
        m.lambda = j.at("lambda").get<double>();
        m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
        m.scaler.scale = j.at("scaler").at("scale").get<std::vector<double>>();
        m.weights = j.at("weights").get<std::vector<double>>();
        m.intercept_standardized = j.at("intercept_standardized").get<double>();
        m.coefficients = j.at("coefficients").get<std::vector<double>>();
        m.intercept = j.at("intercept").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("ridge model JSON: ") + e.what());
    }
    const auto p = m.coefficients.size();
    if (m.weights.size() != p || m.scaler.mean.size() != p || m.scaler.scale.size() != p) {
        throw ValidationError("ridge model JSON: inconsistent dimensions");
    }
}

}  // namespace camp
