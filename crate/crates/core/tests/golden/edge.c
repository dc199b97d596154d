/* ==== types.h ==== */
#ifndef MIMOSA_TYPES_H
#define MIMOSA_TYPES_H

#include <math.h>
#include <stdbool.h>
#include <stdint.h>

#include "runtime.h"

typedef unsigned char unit_t;

/* Integer arithmetic wraps and division by zero yields 0. */
static inline int64_t mimosa_add_int(int64_t a, int64_t b) { return (int64_t)((uint64_t)a + (uint64_t)b); }
static inline int64_t mimosa_sub_int(int64_t a, int64_t b) { return (int64_t)((uint64_t)a - (uint64_t)b); }
static inline int64_t mimosa_mul_int(int64_t a, int64_t b) { return (int64_t)((uint64_t)a * (uint64_t)b); }
static inline int64_t mimosa_neg_int(int64_t a) { return (int64_t)(0u - (uint64_t)a); }
static inline int64_t mimosa_div_int(int64_t a, int64_t b)
{
    if (b == 0)
        return 0;
    if (a == INT64_MIN && b == -1)
        return INT64_MIN;
    return a / b;
}

struct opt_bool
{
    bool is_some;
    bool value;
};

struct tup2_bool_bool
{
    bool _0;
    bool _1;
};

#ifdef MIMOSA_TRACE
static inline void trace_opt_bool(struct opt_bool v)
{
    if (v.is_some) {
        trace_text("Some(");
        trace_bool(v.value);
        trace_text(")");
    } else {
        trace_text("None");
    }
}
static inline void trace_tup2_bool_bool(struct tup2_bool_bool v)
{
    trace_text("(");
    trace_bool(v._0);
    trace_text(",");
    trace_bool(v._1);
    trace_text(")");
}
#endif

#endif
/* ==== poll.h ==== */
#ifndef MIMOSA_POLL_H
#define MIMOSA_POLL_H

#include "types.h"

/* Provided by external code. */
extern bool poll(void);

#endif
/* ==== toggle_led.h ==== */
#ifndef MIMOSA_TOGGLE_LED_H
#define MIMOSA_TOGGLE_LED_H

#include "types.h"

/* Provided by external code. */
extern void toggle_led(void);

#endif
/* ==== edge.h ==== */
#ifndef MIMOSA_EDGE_H
#define MIMOSA_EDGE_H

#include "types.h"

struct edge_state_t
{
    bool __tmp27;
    bool __first28;
};

void edge_reset(struct edge_state_t *);
struct opt_bool edge_step(bool, struct edge_state_t *);

#endif
/* ==== edge.c ==== */
#include "edge.h"

void edge_reset(struct edge_state_t *self)
{
    self->__tmp27 = false;
    self->__first28 = true;
}

struct opt_bool edge_step(bool __in0, struct edge_state_t *self)
{
    bool __r1 = false;
    bool __r10 = false;
    bool __r14 = false;
    struct tup2_bool_bool __r17 = ((struct tup2_bool_bool){ false, false });
    bool __r19 = false;
    struct opt_bool __r23 = ((struct opt_bool){ false, false });
    bool __r5 = false;
    struct tup2_bool_bool __r8 = ((struct tup2_bool_bool){ false, false });
    bool __t29 = false;
    bool __x11 = false;
    bool __x20 = false;
    bool in = false;
    struct opt_bool out = ((struct opt_bool){ false, false });
    bool pre_in = false;

    in = __in0;
    __r1 = self->__tmp27;
    __t29 = self->__first28;
    if (__t29) {
        pre_in = in;
    } else {
        pre_in = __r1;
    }
    self->__first28 = false;
    __r5 = !pre_in;
    __r8 = ((struct tup2_bool_bool){ __r5, in });
    __r10 = __r8._0 && __r8._1;
    if (__r10) {
        __x11 = true;
        out = ((struct opt_bool){ true, __x11 });
    } else {
        __r14 = !in;
        __r17 = ((struct tup2_bool_bool){ pre_in, __r14 });
        __r19 = __r17._0 && __r17._1;
        if (__r19) {
            __x20 = false;
            __r23 = ((struct opt_bool){ true, __x20 });
        } else {
            __r23 = ((struct opt_bool){ false, false });
        }
        out = __r23;
    }
    self->__tmp27 = in;
    return out;
}
/* ==== toggle.h ==== */
#ifndef MIMOSA_TOGGLE_H
#define MIMOSA_TOGGLE_H

#include "types.h"

#include "toggle_led.h"

void toggle_step(bool);

#endif
/* ==== toggle.c ==== */
#include "toggle.h"

void toggle_step(bool __in0)
{
    bool in = false;

    in = __in0;
    if (in) {
        toggle_led();
    } else {
    }
    return;
}
/* ==== network.c ==== */
#include "runtime.h"
#include "types.h"
#include "edge.h"
#include "poll.h"
#include "toggle.h"

#define A_SIZE 4
#define B_SIZE 4

static const timestamp_t button_period = 50000;
static const timestamp_t edge_period = 50000;
static const timestamp_t led_period = 300000;

static queue_t a;
static queue_t a_stamps;
static queue_t b;
static queue_t b_stamps;

static void button_task(void)
{
    timestamp_t now = 0;

    while (1) {
        timestamp_t next_period = now + button_period;
        bool r = poll();

        TRACE(trace_begin(now, "FIRE", "button"));
        TRACE(trace_open("in"));
        TRACE(trace_close());
        TRACE(trace_open("out"));
        if (!queue_send(a, &r)) {
            TRACE(trace_close());
            TRACE(trace_end());
            channel_overflow(now, "a");
        }
        (void)queue_send(a_stamps, &next_period);
        TRACE(trace_sep());
        TRACE(trace_text("a:"));
        TRACE(trace_bool(r));
        TRACE(trace_stamp(next_period));
        TRACE(trace_close());
        TRACE(trace_end());
        now = next_period;
        sleep_until(next_period);
    }
}

static void edge_task(void)
{
    struct edge_state_t self;
    edge_reset(&self);

    timestamp_t now = 0;

    while (1) {
        timestamp_t next_period = now + edge_period;
        bool a_avail = check_avail(now, a_stamps);
        if (a_avail) {
            bool a_val;
            queue_recv(a, &a_val);
            queue_recv(a_stamps, NULL);
            struct opt_bool r = edge_step(a_val, &self);

            TRACE(trace_begin(now, "FIRE", "edge"));
            TRACE(trace_open("in"));
            TRACE(trace_sep());
            TRACE(trace_bool(a_val));
            TRACE(trace_close());
            TRACE(trace_open("out"));
            if (r.is_some) {
                if (!queue_send(b, &r.value)) {
                    TRACE(trace_close());
                    TRACE(trace_end());
                    channel_overflow(now, "b");
                }
                (void)queue_send(b_stamps, &next_period);
                TRACE(trace_sep());
                TRACE(trace_text("b:"));
                TRACE(trace_bool(r.value));
                TRACE(trace_stamp(next_period));
            }
            TRACE(trace_close());
            TRACE(trace_end());
        } else {
            TRACE(trace_begin(now, "SKIP", "edge"));
            TRACE(trace_open("missing"));
            if (!a_avail) {
                TRACE(trace_sep());
                TRACE(trace_text("a"));
            }
            TRACE(trace_close());
            TRACE(trace_end());
        }
        now = next_period;
        sleep_until(next_period);
    }
}

static void led_task(void)
{
    timestamp_t now = 0;

    while (1) {
        timestamp_t next_period = now + led_period;
        bool b_avail = check_avail(now, b_stamps);
        if (b_avail) {
            bool b_val;
            queue_recv(b, &b_val);
            queue_recv(b_stamps, NULL);
            toggle_step(b_val);

            TRACE(trace_begin(now, "FIRE", "led"));
            TRACE(trace_open("in"));
            TRACE(trace_sep());
            TRACE(trace_bool(b_val));
            TRACE(trace_close());
            TRACE(trace_open("out"));
            TRACE(trace_close());
            TRACE(trace_end());
        } else {
            TRACE(trace_begin(now, "SKIP", "led"));
            TRACE(trace_open("missing"));
            if (!b_avail) {
                TRACE(trace_sep());
                TRACE(trace_text("b"));
            }
            TRACE(trace_close());
            TRACE(trace_end());
        }
        now = next_period;
        sleep_until(next_period);
    }
}

int main(void)
{
    a = create_queue(A_SIZE, sizeof(bool));
    a_stamps = create_queue(A_SIZE, sizeof(timestamp_t));
    b = create_queue(B_SIZE, sizeof(bool));
    b_stamps = create_queue(B_SIZE, sizeof(timestamp_t));
    spawn_task(button_task, "button", 2u, 512u);
    spawn_task(edge_task, "edge", 3u, 1024u);
    spawn_task(led_task, "led", 1u, 512u);
    start_scheduler();
    return 0;
}
/* ==== runtime.h ==== */
#ifndef MIMOSA_RUNTIME_H
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
