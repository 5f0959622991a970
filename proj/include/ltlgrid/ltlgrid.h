#ifndef LTLGRID_H
#define LTLGRID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LTLGRID_BUILDING)
#    define LTLGRID_API __declspec(dllexport)
#  else
#    define LTLGRID_API __declspec(dllimport)
#  endif
#else
#  define LTLGRID_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltlg_status {
  LTLG_OK = 0,
  LTLG_INVALID_ARGUMENT = 1,
  LTLG_SYNTAX = 2,
  LTLG_VALIDATION = 3,
  LTLG_RESOURCE = 4,
  LTLG_IO = 5,
  LTLG_INTERNAL = 6
} ltlg_status;

typedef struct ltlg_formula ltlg_formula;
typedef struct ltlg_automaton ltlg_automaton;
typedef struct ltlg_scenario ltlg_scenario;
typedef struct ltlg_report ltlg_report;

typedef struct ltlg_options {
  int has_seed;
  uint64_t seed;
  size_t accepting_target; /* 0 keeps the scenario value */
  size_t max_steps;        /* 0 keeps the scenario value */
  size_t snapshot_every;   /* 0 disables map snapshots */
  int relaxed_avoidance;   /* nonzero forces it on */
  int occlusion;           /* nonzero forces it on */
} ltlg_options;

LTLGRID_API void ltlg_options_init(ltlg_options* opts);

/* Message of the last failed call on this thread; never NULL. */
LTLGRID_API const char* ltlg_last_error(void);
LTLGRID_API const char* ltlg_version(void);

/* Strings returned through `const char**` stay valid until the owning handle is freed. */
LTLGRID_API ltlg_status ltlg_formula_parse(const char* text, ltlg_formula** out);
LTLGRID_API ltlg_status ltlg_formula_text(const ltlg_formula* f, const char** out);
LTLGRID_API ltlg_status ltlg_formula_nnf(const ltlg_formula* f, ltlg_formula** out);
LTLGRID_API void ltlg_formula_free(ltlg_formula* f);

LTLGRID_API ltlg_status ltlg_automaton_translate(const ltlg_formula* f, ltlg_automaton** out);
LTLGRID_API ltlg_status ltlg_automaton_import(const char* text, ltlg_automaton** out);
LTLGRID_API ltlg_status ltlg_automaton_export(const ltlg_automaton* a, const char** out);
LTLGRID_API size_t ltlg_automaton_num_states(const ltlg_automaton* a);
LTLGRID_API size_t ltlg_automaton_num_transitions(const ltlg_automaton* a);
/* prefix and cycle are ';'-separated symbols such as "{p1@l1};{}"; cycle must be nonempty. */
LTLGRID_API ltlg_status ltlg_automaton_accepts_lasso(const ltlg_automaton* a, const char* prefix, const char* cycle,
                                                     int* accepted);
LTLGRID_API void ltlg_automaton_free(ltlg_automaton* a);

LTLGRID_API ltlg_status ltlg_scenario_load_file(const char* path, ltlg_scenario** out);
LTLGRID_API ltlg_status ltlg_scenario_parse(const char* text, ltlg_scenario** out);
LTLGRID_API ltlg_status ltlg_scenario_text(const ltlg_scenario* s, const char** out);
LTLGRID_API void ltlg_scenario_free(ltlg_scenario* s);

/* out_dir may be NULL, in which case no files are written. */
LTLGRID_API ltlg_status ltlg_compile(const ltlg_scenario* s, const char* out_dir, ltlg_report** out);
LTLGRID_API ltlg_status ltlg_run(const ltlg_scenario* s, const ltlg_options* opts, const char* out_dir,
                                 ltlg_report** out);
LTLGRID_API ltlg_status ltlg_sweep_sensor_range(const ltlg_scenario* s, const ltlg_options* opts,
                                                const double* values, size_t count, const char* out_dir,
                                                ltlg_report** out);

/* 0 success, 2 infeasible offline, 3 infeasible online. */
LTLGRID_API int ltlg_report_exit_code(const ltlg_report* r);
LTLGRID_API const char* ltlg_report_text(const ltlg_report* r);
LTLGRID_API const char* ltlg_report_json(const ltlg_report* r);
LTLGRID_API void ltlg_report_free(ltlg_report* r);

#ifdef __cplusplus
}
#endif

#endif
