#pragma once

#include <stdexcept>
#include <string>

namespace femto {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config or scenario contents violate an invariant. Messages carry the
// offending field path, e.g. "nodes[2].serving_fbs: unknown fBS id 7".
struct ValidationError : Error {
  using Error::Error;
};

// Nonpositive channel gain fed to an airlink power rule.
struct InvalidGainError : Error {
  using Error::Error;
};

// The coordinating fBS's own fMS is absent from the decoded RRM set.
struct OwnRrmMissingError : Error {
  using Error::Error;
};

// An objective was evaluated in a mode its context does not support.
struct ModeError : Error {
  using Error::Error;
};

// A retransmission sentinel reached a term that needs a positive target SINR.
struct SentinelLeakError : Error {
  using Error::Error;
};

// The power map lacks an entry the current round phase needs.
struct IncompleteRoundError : Error {
  using Error::Error;
};

}  // namespace femto
