#include "fstar/types.hpp"
// placeholder
