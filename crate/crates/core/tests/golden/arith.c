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

struct tup2_bool_bool
{
    bool _0;
    bool _1;
};

struct tup2_float_float
{
    double _0;
    double _1;
};

struct tup2_int_int
{
    int64_t _0;
    int64_t _1;
};

struct tup3_bool_bool_bool
{
    bool _0;
    bool _1;
    bool _2;
};

struct tup3_int_int_int
{
    int64_t _0;
    int64_t _1;
    int64_t _2;
};

#ifdef MIMOSA_TRACE
static inline void trace_tup2_bool_bool(struct tup2_bool_bool v)
{
    trace_text("(");
    trace_bool(v._0);
    trace_text(",");
    trace_bool(v._1);
    trace_text(")");
}
static inline void trace_tup2_float_float(struct tup2_float_float v)
{
    trace_text("(");
    trace_float(v._0);
    trace_text(",");
    trace_float(v._1);
    trace_text(")");
}
static inline void trace_tup2_int_int(struct tup2_int_int v)
{
    trace_text("(");
    trace_int(v._0);
    trace_text(",");
    trace_int(v._1);
    trace_text(")");
}
static inline void trace_tup3_bool_bool_bool(struct tup3_bool_bool_bool v)
{
    trace_text("(");
    trace_bool(v._0);
    trace_text(",");
    trace_bool(v._1);
    trace_text(",");
    trace_bool(v._2);
    trace_text(")");
}
static inline void trace_tup3_int_int_int(struct tup3_int_int_int v)
{
    trace_text("(");
    trace_int(v._0);
    trace_text(",");
    trace_int(v._1);
    trace_text(",");
    trace_int(v._2);
    trace_text(")");
}
#endif

#endif
/* ==== affine.h ==== */
#ifndef MIMOSA_AFFINE_H
#define MIMOSA_AFFINE_H

#include "types.h"

double affine_step(double);

#endif
/* ==== affine.c ==== */
#include "affine.h"

double affine_step(double __in0)
{
    double __r10 = 0.0;
    struct tup2_float_float __r13 = ((struct tup2_float_float){ 0.0, 0.0 });
    struct tup2_float_float __r3 = ((struct tup2_float_float){ 0.0, 0.0 });
    double __r5 = 0.0;
    struct tup2_float_float __r8 = ((struct tup2_float_float){ 0.0, 0.0 });
    double __t1 = 0.0;
    double __t6 = 0.0;
    double __t7 = 0.0;
    double x = 0.0;
    double y = 0.0;

    x = __in0;
    __t1 = 2.5;
    __r3 = ((struct tup2_float_float){ __t1, x });
    __r5 = __r3._0 * __r3._1;
    __t6 = 1.0;
    __t7 = 4.0;
    __r8 = ((struct tup2_float_float){ __t6, __t7 });
    __r10 = __r8._0 / __r8._1;
    __r13 = ((struct tup2_float_float){ __r5, __r10 });
    y = __r13._0 - __r13._1;
    return y;
}
/* ==== clamp.h ==== */
#ifndef MIMOSA_CLAMP_H
#define MIMOSA_CLAMP_H

#include "types.h"

int64_t clamp_step(struct tup3_int_int_int);

#endif
/* ==== clamp.c ==== */
#include "clamp.h"

int64_t clamp_step(struct tup3_int_int_int __in0)
{
    bool __r10 = false;
    int64_t __r12 = INT64_C(0);
    struct tup2_int_int __r3 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    bool __r5 = false;
    struct tup2_int_int __r8 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    struct tup3_int_int_int __t16 = ((struct tup3_int_int_int){ INT64_C(0), INT64_C(0), INT64_C(0) });
    int64_t hi = INT64_C(0);
    int64_t lo = INT64_C(0);
    int64_t x = INT64_C(0);
    int64_t y = INT64_C(0);

    __t16 = __in0;
    lo = __t16._0;
    hi = __t16._1;
    x = __t16._2;
    __r3 = ((struct tup2_int_int){ x, lo });
    __r5 = __r3._0 < __r3._1;
    if (__r5) {
        y = lo;
    } else {
        __r8 = ((struct tup2_int_int){ x, hi });
        __r10 = __r8._0 > __r8._1;
        if (__r10) {
            __r12 = hi;
        } else {
            __r12 = x;
        }
        y = __r12;
    }
    return y;
}
/* ==== divmod.h ==== */
#ifndef MIMOSA_DIVMOD_H
#define MIMOSA_DIVMOD_H

#include "types.h"

struct tup2_int_int divmod_step(struct tup2_int_int);

#endif
/* ==== divmod.c ==== */
#include "divmod.h"

struct tup2_int_int divmod_step(struct tup2_int_int __in0)
{
    struct tup2_int_int __out16 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    int64_t __r10 = INT64_C(0);
    struct tup2_int_int __r13 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    struct tup2_int_int __r3 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    struct tup2_int_int __r8 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    struct tup2_int_int __t17 = ((struct tup2_int_int){ INT64_C(0), INT64_C(0) });
    int64_t a = INT64_C(0);
    int64_t b = INT64_C(0);
    int64_t q = INT64_C(0);
    int64_t r = INT64_C(0);

    __t17 = __in0;
    a = __t17._0;
    b = __t17._1;
    __r3 = ((struct tup2_int_int){ a, b });
    q = mimosa_div_int(__r3._0, __r3._1);
    __r8 = ((struct tup2_int_int){ q, b });
    __r10 = mimosa_mul_int(__r8._0, __r8._1);
    __r13 = ((struct tup2_int_int){ a, __r10 });
    r = mimosa_sub_int(__r13._0, __r13._1);
    __out16 = ((struct tup2_int_int){ q, r });
    return __out16;
}
/* ==== logic.h ==== */
#ifndef MIMOSA_LOGIC_H
#define MIMOSA_LOGIC_H

#include "types.h"

struct tup3_bool_bool_bool logic_step(struct tup2_bool_bool);

#endif
/* ==== logic.c ==== */
#include "logic.h"

struct tup3_bool_bool_bool logic_step(struct tup2_bool_bool __in0)
{
    struct tup3_bool_bool_bool __out28 = ((struct tup3_bool_bool_bool){ false, false, false });
    struct tup2_bool_bool __r13 = ((struct tup2_bool_bool){ false, false });
    bool __r15 = false;
    struct tup2_bool_bool __r18 = ((struct tup2_bool_bool){ false, false });
    bool __r20 = false;
    bool __r22 = false;
    struct tup2_bool_bool __r25 = ((struct tup2_bool_bool){ false, false });
    struct tup2_bool_bool __r3 = ((struct tup2_bool_bool){ false, false });
    struct tup2_bool_bool __r8 = ((struct tup2_bool_bool){ false, false });
    struct tup2_bool_bool __t29 = ((struct tup2_bool_bool){ false, false });
    bool a = false;
    bool b = false;
    bool e = false;
    bool o = false;
    bool x = false;

    __t29 = __in0;
    a = __t29._0;
    b = __t29._1;
    __r3 = ((struct tup2_bool_bool){ a, b });
    e = __r3._0 == __r3._1;
    __r8 = ((struct tup2_bool_bool){ a, b });
    o = __r8._0 || __r8._1;
    __r13 = ((struct tup2_bool_bool){ a, b });
    __r15 = __r13._0 || __r13._1;
    __r18 = ((struct tup2_bool_bool){ a, b });
    __r20 = __r18._0 && __r18._1;
    __r22 = !__r20;
    __r25 = ((struct tup2_bool_bool){ __r15, __r22 });
    x = __r25._0 && __r25._1;
    __out28 = ((struct tup3_bool_bool_bool){ x, o, e });
    return __out28;
}
/* ==== sign.h ==== */
#ifndef MIMOSA_SIGN_H
#define MIMOSA_SIGN_H

#include "types.h"

int64_t sign_step(double);

#endif
/* ==== sign.c ==== */
#include "sign.h"

int64_t sign_step(double __in0)
{
    bool __r10 = false;
    int64_t __r12 = INT64_C(0);
    int64_t __r14 = INT64_C(0);
    struct tup2_float_float __r3 = ((struct tup2_float_float){ 0.0, 0.0 });
    bool __r5 = false;
    struct tup2_float_float __r8 = ((struct tup2_float_float){ 0.0, 0.0 });
    double __t2 = 0.0;
    double __t7 = 0.0;
    int64_t __x11 = INT64_C(0);
    int64_t s = INT64_C(0);
    double x = 0.0;

    x = __in0;
    __t2 = 0.0;
    __r3 = ((struct tup2_float_float){ x, __t2 });
    __r5 = __r3._0 > __r3._1;
    if (__r5) {
        s = INT64_C(1);
    } else {
        __t7 = 0.0;
        __r8 = ((struct tup2_float_float){ x, __t7 });
        __r10 = __r8._0 < __r8._1;
        if (__r10) {
            __x11 = INT64_C(1);
            __r12 = mimosa_neg_int((__x11));
            __r14 = __r12;
        } else {
            __r14 = INT64_C(0);
        }
        s = __r14;
    }
    return s;
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
