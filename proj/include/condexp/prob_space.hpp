#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace condexp {

/// Outcomes with p_i = 0 are "null"; two random variables that agree on
/// every non-null outcome within this tolerance are identified.
inline constexpr double kAlmostSureTolerance = 1e-9;

/// A finite probability space. Weights are normalized on construction and
/// the power set of the outcomes plays the role of the full sigma-algebra.
class ProbabilitySpace {
public:
    /// Throws Error{EmptyInput | NegativeWeight | NonFinite | ZeroMass}.
    static ProbabilitySpace create(std::span<const double> weights,
                                   std::vector<std::string> labels = {});

    static ProbabilitySpace uniform(std::size_t n);

    std::size_t size() const noexcept { return weights_.size(); }
    std::span<const double> weights() const noexcept { return weights_; }
    double weight(std::size_t i) const { return weights_.at(i); }
    bool is_null(std::size_t i) const { return weights_.at(i) == 0.0; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

private:
    ProbabilitySpace() = default;

    std::vector<double> weights_;
    std::vector<std::string> labels_;
};

/// A real value per outcome. Membership in a space is a length match,
/// checked by every operation that takes both.
class RandomVariable {
public:
    RandomVariable() = default;
    /// Throws Error{NonFinite} on NaN or infinite entries.
    explicit RandomVariable(std::vector<double> values);
    RandomVariable(std::initializer_list<double> values);

    static RandomVariable constant(std::size_t n, double c);
    static RandomVariable zero(std::size_t n) { return constant(n, 0.0); }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    friend RandomVariable operator+(const RandomVariable& a, const RandomVariable& b);
    friend RandomVariable operator-(const RandomVariable& a, const RandomVariable& b);
    friend RandomVariable operator*(double s, const RandomVariable& a);
    friend bool operator==(const RandomVariable&, const RandomVariable&) = default;

private:
    std::vector<double> values_;
};

/// A set of outcome indices, kept sorted and free of duplicates.
class Event {
public:
    Event() = default;
    explicit Event(std::vector<std::size_t> members);
    Event(std::initializer_list<std::size_t> members);

    static Event all(std::size_t n);

    std::span<const std::size_t> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    bool contains(std::size_t i) const;

    /// Throws Error{IndexOutOfRange} when a member is >= n.
    void validate(std::size_t n) const;

    Event complement(std::size_t n) const;

    friend bool operator==(const Event&, const Event&) = default;

private:
    std::vector<std::size_t> members_;
};

/// Throws Error{SizeMismatch} unless X has one value per outcome.
void require_member(const ProbabilitySpace& space, const RandomVariable& x);

double expectation(const ProbabilitySpace& space, const RandomVariable& x);
double inner_product(const ProbabilitySpace& space, const RandomVariable& x,
                     const RandomVariable& y);
double norm2(const ProbabilitySpace& space, const RandomVariable& x);
double norm1(const ProbabilitySpace& space, const RandomVariable& x);
double probability(const ProbabilitySpace& space, const Event& b);
/// Integral of X over the event B.
double integrate_over(const ProbabilitySpace& space, const RandomVariable& x,
                      const Event& b);

/// Largest |x_i - y_i| over outcomes with positive probability.
double almost_sure_distance(const ProbabilitySpace& space, const RandomVariable& x,
                            const RandomVariable& y);
bool almost_surely_equal(const ProbabilitySpace& space, const RandomVariable& x,
                         const RandomVariable& y,
                         double tolerance = kAlmostSureTolerance);

}  // namespace condexp
