#pragma once

#include <stdexcept>
#include <string>

namespace cartankit {

/** \brief Base class for all library errors. */
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/** \brief Matrix or vector dimensions do not fit the operation. */
class shape_error : public error {
public:
    using error::error;
};

/** \brief A computation would leave the double range. */
class overflow_error : public error {
public:
    using error::error;
};

/** \brief Bad argument outside shape problems (e.g. n < 3). */
class domain_error : public error {
public:
    using error::error;
};

/** \brief A matrix is not a member of the group under test. */
class not_member_error : public error {
public:
    using error::error;
};

/** \brief A basis is dependent or not closed under the bracket. */
class not_subalgebra_error : public error {
public:
    using error::error;
};

/** \brief The standardizer could not make a subalgebra compatible with A. */
class nonstandard_error : public error {
public:
    explicit nonstandard_error(const std::string& what, double defect = 0.0)
        : error(what), defect_(defect) {}
    double defect() const noexcept { return defect_; }

private:
    double defect_;
};

/** \brief A classification input matched none of the known cases. */
class defect_error : public error {
public:
    using error::error;
};

} // namespace cartankit
