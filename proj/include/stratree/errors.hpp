#pragma once

#include <stdexcept>
#include <string>

namespace stratree {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input (malformed files, invalid configuration). The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

#define STRATREE_DEFINE_ERROR(Name, Base) \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  };

// seqio
STRATREE_DEFINE_ERROR(AlignmentLengthError, InputError)
STRATREE_DEFINE_ERROR(DuplicateTaxonError, InputError)
STRATREE_DEFINE_ERROR(AlphabetError, InputError)
STRATREE_DEFINE_ERROR(FastaSyntaxError, InputError)
STRATREE_DEFINE_ERROR(NoComparableSitesError, InputError)
STRATREE_DEFINE_ERROR(NewickSyntaxError, InputError)
STRATREE_DEFINE_ERROR(NegativeLengthError, InputError)
STRATREE_DEFINE_ERROR(CsvSyntaxError, InputError)

// njtree
STRATREE_DEFINE_ERROR(TooFewTaxaError, InputError)
STRATREE_DEFINE_ERROR(InvalidMatrixError, InputError)
STRATREE_DEFINE_ERROR(UnknownTaxonError, InputError)

// statistics
STRATREE_DEFINE_ERROR(EmptySampleError, InputError)
STRATREE_DEFINE_ERROR(InsufficientDataError, InputError)
STRATREE_DEFINE_ERROR(WrongRegimeError, Error)
STRATREE_DEFINE_ERROR(NotInBookError, InputError)
STRATREE_DEFINE_ERROR(UndefinedProjectionError, InputError)
STRATREE_DEFINE_ERROR(InvalidPointError, InputError)

// cli / json
STRATREE_DEFINE_ERROR(ConfigError, InputError)

#undef STRATREE_DEFINE_ERROR

}  // namespace stratree
