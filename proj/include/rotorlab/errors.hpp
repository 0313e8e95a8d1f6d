#pragma once

#include <stdexcept>
#include <string>

namespace rotorlab {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed graph file or generator spec string.
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally invalid graph: broken reverse involution, disconnected,
// bad port orders, out-of-range parameters.
class GraphError : public Error {
public:
    using Error::Error;
};

// Invalid initial state (wrong vector sizes, negative loads, bad pointer).
class StateError : public Error {
public:
    using Error::Error;
};

// Analysis requires a non-bipartite graph and the input is bipartite.
class BipartiteError : public Error {
public:
    using Error::Error;
};

// A configured size cap (shift modulus, BFS state count) was exceeded.
class CapError : public Error {
public:
    using Error::Error;
};

// Step budget ran out before recurrence was detected.
class BudgetError : public Error {
public:
    using Error::Error;
};

// No arc bijection compatible with the trace exists at some vertex.
// On a recurrent trace this indicates an engine bug, not bad input.
class CirculationError : public Error {
public:
    using Error::Error;
};

} // namespace rotorlab
