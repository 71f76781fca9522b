// Error types shared by all modules. Every failure mode carries a message
// naming the offending quantity; callers catch by type.
#pragma once

#include <stdexcept>
#include <string>

namespace imcf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// geometry
struct KinkPointError : Error { using Error::Error; };        // derivative queried at a kink without a side
struct DomainMismatchError : Error { using Error::Error; };   // range not covered by both metrics
struct BadParamsError : Error { using Error::Error; };        // invalid construction parameters
struct EmptyRangeError : Error { using Error::Error; };       // empty or inverted query range

// flow
struct HullEscapesError : Error { using Error::Error; };      // minimizing hull reaches r_max
struct FlowExitedError : Error { using Error::Error; };       // level t beyond the truncated domain

// variational
struct GridMismatchError : Error { using Error::Error; };     // profiles on different grids
struct CompetitorModifiesOutsideKError : Error { using Error::Error; };
struct NoConvergenceError : Error { using Error::Error; };    // fixed point not reached in max_iter
struct NonMeanConvexError : Error { using Error::Error; };    // H <= 0 at the candidate boundary
struct CertificationFailedError : Error { using Error::Error; };
struct UncertifiedBubbleError : Error { using Error::Error; };

// p_approx
struct IntegralDivergesError : Error { using Error::Error; };

// harness
struct InconclusiveError : Error { using Error::Error; };     // hypothesis violated, not a failure

}  // namespace imcf
