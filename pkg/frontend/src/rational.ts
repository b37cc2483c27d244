// Exact handling of served rationals. The cockpit does no geometry of
// its own; the only arithmetic here is bigint evaluation of served
// inequality rows (containment lookups) and sign flips for the gain
// axis, both over values the service provided.

import type { PointJson, PolyhedronJson, RationalJson } from "./types.js";

export interface Frac {
  num: bigint;
  den: bigint; // always positive
}

export function parseRational(r: RationalJson): Frac {
  if (typeof r === "number") {
    if (!Number.isInteger(r)) {
      throw new Error(`non-integer numeric rational ${r}`);
    }
    return { num: BigInt(r), den: 1n };
  }
  const m = /^([+-]?\d+)(?:\/(\d+))?$/.exec(r.trim());
  if (!m) throw new Error(`malformed rational ${JSON.stringify(r)}`);
  const den = m[2] === undefined ? 1n : BigInt(m[2]);
  if (den === 0n) throw new Error(`zero denominator in ${r}`);
  return { num: BigInt(m[1]), den };
}

export function toNumber(r: RationalJson): number {
  const { num, den } = parseRational(r);
  return Number(num) / Number(den);
}

export function negate(r: RationalJson): RationalJson {
  if (typeof r === "number") return r === 0 ? 0 : -r;
  return r.startsWith("-") ? r.slice(1) : r === "0" ? r : `-${r}`;
}

/** Exact tooltip form: always num/den, e.g. "-550/1" or "700/3". */
export function exactTooltip(r: RationalJson): string {
  const { num, den } = parseRational(r);
  return `${num}/${den}`;
}

/** Display form: integers bare, fractions to two decimal places. */
export function displayValue(r: RationalJson): string {
  const { num, den } = parseRational(r);
  if (den === 1n) return num.toString();
  return fixed2(r);
}

/** Two-decimal rendering used by the outcome card ("250.00"). */
export function fixed2(r: RationalJson): string {
  const { num, den } = parseRational(r);
  const neg = num < 0n;
  const abs = neg ? -num : num;
  const scaled = (abs * 200n + den) / (2n * den); // round half up
  const whole = scaled / 100n;
  const cents = (scaled % 100n).toString().padStart(2, "0");
  return `${neg && scaled > 0n ? "-" : ""}${whole}.${cents}`;
}

function cmpProducts(a: Frac, b: Frac): number {
  // sign of a - b via cross multiplication (denominators positive)
  const lhs = a.num * b.den;
  const rhs = b.num * a.den;
  return lhs === rhs ? 0 : lhs < rhs ? -1 : 1;
}

function dotRow(row: PointJson, point: Frac[]): Frac {
  let num = 0n;
  let den = 1n;
  row.forEach((c, i) => {
    const f = parseRational(c);
    const term = { num: f.num * point[i].num, den: f.den * point[i].den };
    num = num * term.den + term.num * den;
    den = den * term.den;
  });
  return { num, den };
}

/** Exact membership lookup against a served inequality representation. */
export function containsPoint(
  poly: PolyhedronJson,
  point: RationalJson[],
): boolean {
  if (poly.empty || !poly.hrep) return false;
  const p = point.map(parseRational);
  const { A, b, A_eq, b_eq } = poly.hrep;
  for (let i = 0; i < A.length; i++) {
    if (cmpProducts(dotRow(A[i], p), parseRational(b[i])) < 0) return false;
  }
  for (let i = 0; i < A_eq.length; i++) {
    if (cmpProducts(dotRow(A_eq[i], p), parseRational(b_eq[i])) !== 0) {
      return false;
    }
  }
  return true;
}

/** Rational approximation of a mouse position, e.g. hundredths. */
export function approxRational(x: number, scale = 100): RationalJson {
  const num = Math.round(x * scale);
  if (num % scale === 0) return num / scale;
  return `${num}/${scale}`;
}
