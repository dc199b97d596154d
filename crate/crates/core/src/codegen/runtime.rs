//! The runtime API that generated code is written against.
//!
//! Any RTOS port provides these symbols; the header is copied verbatim into
//! every generated project.

pub const RUNTIME_H: &str = r#"#ifndef MIMOSA_RUNTIME_H
#define MIMOSA_RUNTIME_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/* Microseconds since scheduler start. */
typedef uint64_t timestamp_t;

/* Bounded FIFO of fixed-size elements. */
typedef struct queue *queue_t;

typedef void (*task_fn_t)(void);

queue_t create_queue(size_t len, size_t elem_size);

/* Copies one element in; returns false, leaving the queue unchanged, when full. */
bool queue_send(queue_t q, const void *item);

/* Copies the front element out and removes it; `item` may be NULL to drop it. */
void queue_recv(queue_t q, void *item);

/* True iff the stamp queue is non-empty and its front stamp is <= now. */
bool check_avail(timestamp_t now, queue_t stamps);

/* Blocks until the absolute instant `deadline`. */
void sleep_until(timestamp_t deadline);

void spawn_task(task_fn_t fn, const char *name, unsigned priority, size_t stack);

/* Runs the tasks; does not return. */
void start_scheduler(void);

/* Reports a write to a full channel and stops the program. */
void channel_overflow(timestamp_t now, const char *channel);

/* Trace hooks, called by generated code only when MIMOSA_TRACE is defined.
   A line is trace_begin, then lists opened with trace_open, items separated
   by trace_sep, closed by trace_close, and trace_end. */
#ifdef MIMOSA_TRACE
#define TRACE(stmt) stmt
#else
#define TRACE(stmt) ((void)0)
#endif

void trace_begin(timestamp_t now, const char *kind, const char *node);
void trace_open(const char *label);
void trace_sep(void);
void trace_close(void);
void trace_end(void);
void trace_text(const char *text);
void trace_stamp(timestamp_t stamp);
void trace_unit(unsigned char v);
void trace_bool(bool v);
void trace_int(int64_t v);
void trace_float(double v);

#endif
"#;
