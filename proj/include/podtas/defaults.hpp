// Built-in quad-core chip and synthetic task sets, used whenever a config
// leaves floorplan_file or task_file empty. Keeping them in the binary means
// every command works out of the box and run directories stay self-contained.
#pragma once

#include <sstream>
#include <string>

#include "podtas/floorplan.hpp"
#include "podtas/tasks.hpp"

namespace podtas {

// 14 x 12 mm die, 0.3 mm thick: four cores across the top edge, their L2
// slices below, northbridge and io filling the lower half.
inline const std::string& default_floorplan_text() {
  static const std::string text =
      "# quad-core test chip, mm units\n"
      "chip 14 12 0.3\n"
      "core0 0 8 3.5 4 core\n"
      "core1 3.5 8 3.5 4 core\n"
      "core2 7 8 3.5 4 core\n"
      "core3 10.5 8 3.5 4 core\n"
      "l2_0 0 6 3.5 2\n"
      "l2_1 3.5 6 3.5 2\n"
      "l2_2 7 6 3.5 2\n"
      "l2_3 10.5 6 3.5 2\n"
      "nb 0 0 8 6\n"
      "io 8 0 6 6\n";
  return text;
}

// Four periodic tasks with measured-style two-phase power traces. Core
// columns follow the task to whichever core runs it; nb stays put.
inline const std::string& default_tasks_text() {
  static const std::string text =
      "# synthetic four-task set\n"
      "task decode\n"
      "wcet_ms 147\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,8.5,0.8\n"
      "60,7.0,0.8\n"
      "end\n"
      "\n"
      "task render\n"
      "wcet_ms 85\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,10.0,0.6\n"
      "40,8.5,0.6\n"
      "end\n"
      "\n"
      "task dsp\n"
      "wcet_ms 41\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,11.0,0.4\n"
      "end\n"
      "\n"
      "task net\n"
      "wcet_ms 32\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,12.0,0.3\n"
      "end\n";
  return text;
}

// Lighter eight-task variant: two tasks per core once packed.
inline const std::string& default_tasks8_text() {
  static const std::string text =
      "# synthetic eight-task set\n"
      "task decode\n"
      "wcet_ms 147\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,6.0,0.6\n"
      "60,5.0,0.6\n"
      "end\n"
      "\n"
      "task render\n"
      "wcet_ms 85\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,7.0,0.5\n"
      "end\n"
      "\n"
      "task dsp\n"
      "wcet_ms 41\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,7.5,0.3\n"
      "end\n"
      "\n"
      "task net\n"
      "wcet_ms 32\n"
      "deadline_ms 400\n"
      "period_ms 500\n"
      "trace time_ms,core0,nb\n"
      "0,8.0,0.3\n"
      "end\n"
      "\n"
      "task vision\n"
      "wcet_ms 98\n"
      "deadline_ms 400\n"
      "period_ms 400\n"
      "trace time_ms,core0,nb\n"
      "0,5.5,0.4\n"
      "end\n"
      "\n"
      "task crypto\n"
      "wcet_ms 61\n"
      "deadline_ms 400\n"
      "period_ms 400\n"
      "trace time_ms,core0,nb\n"
      "0,6.5,0.4\n"
      "end\n"
      "\n"
      "task log\n"
      "wcet_ms 27\n"
      "deadline_ms 400\n"
      "period_ms 400\n"
      "trace time_ms,core0,nb\n"
      "0,5.0,0.2\n"
      "end\n"
      "\n"
      "task sense\n"
      "wcet_ms 18\n"
      "deadline_ms 400\n"
      "period_ms 400\n"
      "trace time_ms,core0,nb\n"
      "0,4.5,0.2\n"
      "end\n";
  return text;
}

inline Floorplan default_floorplan() {
  std::istringstream in(default_floorplan_text());
  return parse_floorplan(in, "<builtin floorplan>");
}

inline TaskSet default_tasks() {
  std::istringstream in(default_tasks_text());
  return parse_tasks(in, "<builtin tasks>");
}

inline TaskSet default_tasks8() {
  std::istringstream in(default_tasks8_text());
  return parse_tasks(in, "<builtin tasks>");
}

}  // namespace podtas
