#include <stdexcept>

#include "report/corpus.h"

namespace resdbg::report {

namespace {

const char* const k_diff_roots = R"fpk(; Difference of adjacent square roots, then squared. For large x the +1
; is absorbed by the addition, both roots land on the same float, and the
; subtraction cancels y to an exact zero that hides the true gap.
(define (roots-gap x)
  (- (sqrt (+ x 1.0)) (sqrt x)))

(define (main x)
  (let ((y (roots-gap x)))
    (* y y)))
)fpk";

const char* const k_cancel_mul = R"fpk(; Engineered cancellations. p and q are built as (x+1)-x with x large, so
; each has actual 0 but ideal 1, and their product z inherits ideal 1 from
; the cross terms alone. The twin differences v1..v3 cancel residues of
; equal magnitude; summing them separates backends that mishandle the sign
; of the subtrahend residue before the final total r.
(define (main x w)
  (let ((t1 (+ x 1.0))
        (p (- t1 x))
        (t2 (+ w 1.0))
        (q (- t2 w))
        (z (* p q))
        (u1 (+ x 2.0))
        (u2 (+ x 2.0))
        (v1 (- u1 u2))
        (u3 (+ w 2.0))
        (u4 (+ w 2.0))
        (v2 (- u3 u4))
        (u5 (+ x 4.0))
        (u6 (+ x 4.0))
        (v3 (- u5 u6))
        (s1 (+ v1 v2))
        (s2 (+ s1 v3))
        (r (+ z s2)))
    r))
)fpk";

const char* const k_poly_expand = R"fpk(; (x-1)^6 evaluated from its expanded monomial coefficients near x = 1.
; The Horner chain loses nearly every significant digit of the tiny true
; value, so the late adds carry residues far above the warning threshold.
(define (main x)
  (let ((p5 (- x 6.0))
        (p4 (+ (* p5 x) 15.0))
        (p3 (- (* p4 x) 20.0))
        (p2 (+ (* p3 x) 15.0))
        (p1 (- (* p2 x) 6.0))
        (p0 (+ (* p1 x) 1.0)))
    p0))
)fpk";

const char* const k_harmonic_acc = R"fpk(; Loop accumulation of x/i for i = 1..64. Ordinary rounding only: residues
; stay within a few hundred ulps and no warnings should fire anywhere.
(define (main x)
  (while (<= i 64.0)
         ((i 1.0 (+ i 1.0))
          (s 0.0 (+ s (/ x i))))
         s))
)fpk";

const char* const k_sin_reduce = R"fpk(; Cody-Waite style range reduction around pi/2 followed by a short odd
; polynomial. t and n implement round-to-nearest-integer with the
; 1.5*2^52 trick: the huge rounding error of t is intentional, and a
; residue tracker that treats it as accidental floods the reduction with
; spurious warnings. Constants are the classic 33-bit pio2 split.
(define (main x)
  (let ((k (* x 0x1.45f306dc9c883p-1))
        (t (+ k 6755399441055744.0))
        (n (- t 6755399441055744.0))
        (m1 (* n 0x1.921fb544p+0))
        (r1 (- x m1))
        (m2 (* n 0x1.0b4611a626331p-34))
        (r (- r1 m2))
        (r2 (* r r))
        (c1 (+ -0.16666666666666666 (* r2 0.008333333333333333)))
        (c0 (+ 1.0 (* r2 c1)))
        (p (* r c0)))
    p))
)fpk";

const char* const k_cast_chain = R"fpk(; Round-trip through binary32 and first-order reconstruction of the
; narrowing error. d recovers the dropped low part exactly (the
; subtraction is exact in binary64), so d, h and their sum all differ
; from the infinitely precise values by design, while the reassembled
; result r is fine. A tracker that ignores cast rounding misses all of it.
(define (main x)
  (let ((f32 (cast64to32 x))
        (lo (cast32to64 f32))
        (d (- x lo))
        (h (* d d))
        (inner (+ d h))
        (r (+ lo inner)))
    r))
)fpk";

}  // namespace

const std::vector<CorpusEntry>& bundled_corpus() {
    static const std::vector<CorpusEntry> entries = {
        {"diff-roots", "diff-roots.fpk", k_diff_roots,
         "seed=101,count=100,e=[54,250],sign=pos", 1,
         "roots-gap collapses for large x; re-execution recovers y and z"},
        {"cancel-mul", "cancel-mul.fpk", k_cancel_mul,
         "seed=202,count=100,e=[60,200],sign=pos", 2,
         "cross-term product of two unit residues plus twin cancellations"},
        {"poly-expand", "poly-expand.fpk", k_poly_expand,
         "seed=303,count=100,e=[0,0],sign=pos", 1,
         "expanded (x-1)^6: genuine instability every backend should flag"},
        {"harmonic-acc", "harmonic-acc.fpk", k_harmonic_acc,
         "seed=404,count=100,e=[0,3],sign=pos", 1,
         "benign loop accumulation: no warnings expected anywhere"},
        {"sin-reduce", "sin-reduce.fpk", k_sin_reduce,
         "seed=505,count=100,e=[5,8],sign=pos", 1,
         "intentional rounding trick inside the reduction ops"},
        {"cast-chain", "cast-chain.fpk", k_cast_chain,
         "seed=606,count=100,e=[0,3],sign=mixed", 1,
         "deliberate binary32 narrowing and exact low-part arithmetic"},
    };
    return entries;
}

const CorpusEntry* find_corpus_entry(const std::string& name) {
    for (const CorpusEntry& e : bundled_corpus())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace resdbg::report
