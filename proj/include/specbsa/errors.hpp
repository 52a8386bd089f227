#pragma once

#include <stdexcept>
#include <string>

namespace specbsa {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- input validation ---------------------------------------------------------
struct NonSquare : Error { using Error::Error; };
struct NonSymmetric : Error { using Error::Error; };
struct NonFinite : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct InvalidArgument : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// -- numerical kernels --------------------------------------------------------
struct EigensolverFailure : Error { using Error::Error; };
struct OutsideCone : Error { using Error::Error; };       // point violates sorted order
struct InconsistentSystem : Error { using Error::Error; };
struct SolverFailure : Error { using Error::Error; };
struct DegenerateTriangle : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };

// -- model fitting ------------------------------------------------------------
struct BudgetExceeded : Error { using Error::Error; };
struct DegenerateDataset : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// -- data handling ------------------------------------------------------------
struct ParseError : Error { using Error::Error; };
struct UnknownAirport : Error { using Error::Error; };
struct EmptySelection : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };

} // namespace specbsa
