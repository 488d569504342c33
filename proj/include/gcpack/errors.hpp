#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gcp
{

/** @brief Base class for all library errors */
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/** @brief An argument lies outside the domain of the operation */
class DomainError : public Error
{
public:
    using Error::Error;
};

/** @brief A polygon or tangency configuration could not be constructed */
class InfeasibleGeometryError : public Error
{
public:
    using Error::Error;
};

/** @brief The input is too large for an exact (exponential) algorithm */
class CapacityError : public Error
{
public:
    using Error::Error;
};

/** @brief Adaptive step size fell below the underflow threshold */
class StiffnessError : public Error
{
public:
    StiffnessError(const std::string& msg, double t, double h, std::vector<double> state)
        : Error(msg), time_{t}, step_{h}, state_{std::move(state)}
    {
    }

    double time() const noexcept { return time_; }
    double step() const noexcept { return step_; }
    const std::vector<double>& state() const noexcept { return state_; }

private:
    double time_;
    double step_;
    std::vector<double> state_;
};

/** @brief Malformed input document; carries the offending line and field */
class ParseError : public Error
{
public:
    ParseError(const std::string& msg, int line, std::string field)
        : Error(msg), line_{line}, field_{std::move(field)}
    {
    }

    /** 1-based line number, or 0 when unknown */
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

}  // namespace gcp
