import { describe, expect, it } from "vitest";

import {
  approxRational,
  containsPoint,
  displayValue,
  exactTooltip,
  fixed2,
  negate,
  parseRational,
} from "../src/rational.js";
import type { PolyhedronJson } from "../src/types.js";
import { fixture } from "./helpers.js";

describe("rational parsing and display", () => {
  it("parses integers and fractions", () => {
    expect(parseRational(-550)).toEqual({ num: -550n, den: 1n });
    expect(parseRational("700/3")).toEqual({ num: 700n, den: 3n });
    expect(() => parseRational("3.5")).toThrow();
  });

  it("renders decimals to two places with exact tooltips", () => {
    expect(displayValue(-550)).toBe("-550");
    expect(exactTooltip(-550)).toBe("-550/1");
    expect(displayValue("700/3")).toBe("233.33");
    expect(exactTooltip("700/3")).toBe("700/3");
  });

  it("fixed2 is exact-rational rounding", () => {
    expect(fixed2(250)).toBe("250.00");
    expect(fixed2("1000/3")).toBe("333.33");
    expect(fixed2("-1/200")).toBe("-0.01");
    expect(fixed2("1/400")).toBe("0.00");
  });

  it("negation is string-exact", () => {
    expect(negate(-550)).toBe(550);
    expect(negate("700/3")).toBe("-700/3");
    expect(negate("-700/3")).toBe("700/3");
    expect(negate("0")).toBe("0");
  });

  it("approximates pointer positions as small rationals", () => {
    expect(approxRational(-250)).toBe(-250);
    expect(approxRational(233.333)).toBe("23333/100");
  });
});

describe("containment lookups on served inequality data", () => {
  const image = fixture<PolyhedronJson>("upper-image");

  it("accepts interior and boundary points", () => {
    expect(containsPoint(image, [-250, 100])).toBe(true);
    expect(containsPoint(image, [0, 0])).toBe(true);
    expect(containsPoint(image, [-600, "1000/3"])).toBe(true);
  });

  it("rejects points beyond the frontier", () => {
    expect(containsPoint(image, [-601, "1000/3"])).toBe(false);
    expect(containsPoint(image, [0, -1])).toBe(false);
  });
});
