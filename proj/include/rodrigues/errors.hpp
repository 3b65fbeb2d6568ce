#pragma once

#include <stdexcept>
#include <string>

namespace rodrigues {

// Base for every failure the library reports. Callers that only care about
// "did it work" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error { using Error::Error; };
class CenterIsPole : public Error { using Error::Error; };
class NoConvergence : public Error { using Error::Error; };
class EvaluationAtRoot : public Error { using Error::Error; };
class InsufficientOrder : public Error { using Error::Error; };
class DegreeMismatch : public Error { using Error::Error; };
class GenericityFailure : public Error { using Error::Error; };
class OnBranchPoint : public Error { using Error::Error; };
class AmbiguousClassification : public Error { using Error::Error; };
class PathUnresolved : public Error { using Error::Error; };
class InvalidArgument : public Error { using Error::Error; };
class AlphaOutOfRange : public Error { using Error::Error; };
class DegenerateInput : public Error { using Error::Error; };
class RepeatedRoots : public Error { using Error::Error; };
class PoleHit : public Error { using Error::Error; };
class StepFailure : public Error { using Error::Error; };
class DegenerateSaddle : public Error { using Error::Error; };
class OnSupport : public Error { using Error::Error; };
class ContinuationFailure : public Error { using Error::Error; };

} // namespace rodrigues
