#pragma once

#include <stdexcept>
#include <string>

namespace foliate {

struct FoliateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutsideOverlap : FoliateError {
    using FoliateError::FoliateError;
};
struct OutsideBall : FoliateError {
    using FoliateError::FoliateError;
};
struct OutsideDomain : FoliateError {
    using FoliateError::FoliateError;
};
struct NotInDomain : FoliateError {
    using FoliateError::FoliateError;
};
struct EmptyOverlap : FoliateError {
    using FoliateError::FoliateError;
};
struct BrokenChain : FoliateError {
    using FoliateError::FoliateError;
};
struct DisconnectedCover : FoliateError {
    using FoliateError::FoliateError;
};
struct NonFinite : FoliateError {
    using FoliateError::FoliateError;
};
struct Diverged : FoliateError {
    using FoliateError::FoliateError;
};
struct BudgetExhausted : FoliateError {
    using FoliateError::FoliateError;
};
struct AlreadySatisfied : FoliateError {
    using FoliateError::FoliateError;
};
struct DegenerateTask : FoliateError {
    using FoliateError::FoliateError;
};
struct DimensionMismatch : FoliateError {
    using FoliateError::FoliateError;
};
struct EmptyClass : FoliateError {
    using FoliateError::FoliateError;
};
struct ConfigError : FoliateError {
    using FoliateError::FoliateError;
};
struct IoError : FoliateError {
    using FoliateError::FoliateError;
};
struct NoTabularData : FoliateError {
    using FoliateError::FoliateError;
};

}  // namespace foliate
