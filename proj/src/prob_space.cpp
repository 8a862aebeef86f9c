#include "condexp/prob_space.hpp"

#include "condexp/error.hpp"
#include "condexp/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace condexp {

ProbabilitySpace ProbabilitySpace::create(std::span<const double> weights,
                                          std::vector<std::string> labels) {
    if (weights.empty())
        throw Error(ErrorCode::EmptyInput, "probability space needs at least one outcome");
    if (!labels.empty() && labels.size() != weights.size())
        throw Error(ErrorCode::SizeMismatch, "outcome labels do not match weight count");

    CompensatedSum total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (!std::isfinite(w)) {
            std::ostringstream msg;
            msg << "weight " << i << " is not finite";
            throw Error(ErrorCode::NonFinite, msg.str());
        }
        if (w < 0.0) {
            std::ostringstream msg;
            msg << "weight " << i << " is negative (" << w << ")";
            throw Error(ErrorCode::NegativeWeight, msg.str());
        }
        total.add(w);
    }
    const double mass = total.value();
    if (!(mass > 0.0))
        throw Error(ErrorCode::ZeroMass, "weights sum to zero");

    ProbabilitySpace space;
    space.weights_.reserve(weights.size());
    for (double w : weights) space.weights_.push_back(w / mass);
    space.labels_ = std::move(labels);
    return space;
}

ProbabilitySpace ProbabilitySpace::uniform(std::size_t n) {
    return create(std::vector<double>(n, 1.0));
}

RandomVariable::RandomVariable(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            std::ostringstream msg;
            msg << "random variable value " << i << " is not finite";
            throw Error(ErrorCode::NonFinite, msg.str());
        }
    }
}

RandomVariable::RandomVariable(std::initializer_list<double> values)
    : RandomVariable(std::vector<double>(values)) {}

RandomVariable RandomVariable::constant(std::size_t n, double c) {
    return RandomVariable(std::vector<double>(n, c));
}

namespace {

void require_same_size(const RandomVariable& a, const RandomVariable& b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::SizeMismatch, "random variables have different lengths");
}

}  // namespace

RandomVariable operator+(const RandomVariable& a, const RandomVariable& b) {
    require_same_size(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return RandomVariable(std::move(out));
}

RandomVariable operator-(const RandomVariable& a, const RandomVariable& b) {
    require_same_size(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return RandomVariable(std::move(out));
}

RandomVariable operator*(double s, const RandomVariable& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
    return RandomVariable(std::move(out));
}

Event::Event(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Event::Event(std::initializer_list<std::size_t> members)
    : Event(std::vector<std::size_t>(members)) {}

Event Event::all(std::size_t n) {
    std::vector<std::size_t> members(n);
    std::iota(members.begin(), members.end(), std::size_t{0});
    return Event(std::move(members));
}

bool Event::contains(std::size_t i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

void Event::validate(std::size_t n) const {
    if (!members_.empty() && members_.back() >= n) {
        std::ostringstream msg;
        msg << "event member " << members_.back() << " out of range for " << n
            << " outcomes";
        throw Error(ErrorCode::IndexOutOfRange, msg.str());
    }
}

Event Event::complement(std::size_t n) const {
    validate(n);
    std::vector<std::size_t> out;
    out.reserve(n - members_.size());
    for (std::size_t i = 0; i < n; ++i)
        if (!contains(i)) out.push_back(i);
    return Event(std::move(out));
}

void require_member(const ProbabilitySpace& space, const RandomVariable& x) {
    if (x.size() != space.size()) {
        std::ostringstream msg;
        msg << "random variable has " << x.size() << " values but the space has "
            << space.size() << " outcomes";
        throw Error(ErrorCode::SizeMismatch, msg.str());
    }
}

double expectation(const ProbabilitySpace& space, const RandomVariable& x) {
    require_member(space, x);
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(space.weight(i) * x[i]);
    return acc.value();
}

double inner_product(const ProbabilitySpace& space, const RandomVariable& x,
                     const RandomVariable& y) {
    require_member(space, x);
    require_member(space, y);
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(space.weight(i) * x[i] * y[i]);
    return acc.value();
}

double norm2(const ProbabilitySpace& space, const RandomVariable& x) {
    return std::sqrt(inner_product(space, x, x));
}

double norm1(const ProbabilitySpace& space, const RandomVariable& x) {
    require_member(space, x);
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc.add(space.weight(i) * std::abs(x[i]));
    return acc.value();
}

double probability(const ProbabilitySpace& space, const Event& b) {
    b.validate(space.size());
    CompensatedSum acc;
    for (std::size_t i : b.members()) acc.add(space.weight(i));
    return acc.value();
}

double integrate_over(const ProbabilitySpace& space, const RandomVariable& x,
                      const Event& b) {
    require_member(space, x);
    b.validate(space.size());
    CompensatedSum acc;
    for (std::size_t i : b.members()) acc.add(space.weight(i) * x[i]);
    return acc.value();
}

double almost_sure_distance(const ProbabilitySpace& space, const RandomVariable& x,
                            const RandomVariable& y) {
    require_member(space, x);
    require_member(space, y);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!space.is_null(i)) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

bool almost_surely_equal(const ProbabilitySpace& space, const RandomVariable& x,
                         const RandomVariable& y, double tolerance) {
    return almost_sure_distance(space, x, y) <= tolerance;
}

}  // namespace condexp
