#pragma once

namespace foliate {

// Serial paths are the reference implementation; parallel paths must produce
// identical results element-for-element.
enum class Exec { serial, parallel };

}  // namespace foliate
