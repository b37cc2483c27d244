// Wire types of the decision service. Rationals arrive as bare JSON
// numbers (integers) or "num/den" strings and are kept verbatim: the
// cockpit never rewrites mathematical payloads.

export type RationalJson = number | string;
export type PointJson = RationalJson[];

export interface HRepJson {
  A: PointJson[];
  b: RationalJson[];
  senses: string[];
  A_eq: PointJson[];
  b_eq: RationalJson[];
}

export interface PolyhedronJson {
  dim: number;
  empty?: boolean;
  vertices?: PointJson[];
  rays?: PointJson[];
  hrep?: HRepJson;
  gain_vertices?: PointJson[];
}

export interface SolutionEntryJson {
  x: RationalJson[];
  flexibility: PolyhedronJson;
  minimality_certificate: { facet: number; margin: RationalJson }[];
}

export interface SetSolutionJson {
  entries: SolutionEntryJson[];
  vertex_cover: { vertex: PointJson; entry: number }[];
}

export interface WsJson {
  scenarios: { label: string; upper_image: PolyhedronJson }[];
  combined: PolyhedronJson;
}

export interface SurrogatesJson {
  wait_and_see: WsJson;
  expected_value_upper_image: PolyhedronJson;
  inclusion_report: {
    relations: { relation: string; holds: boolean; witness?: PointJson }[];
    max_gain: {
      recourse: RationalJson;
      eev_family: RationalJson | null;
      reached_by_eev_family: boolean | null;
    };
  };
}

export interface EvpiJson {
  v: PointJson;
  region: PolyhedronJson;
}

export type SessionStage =
  | "AwaitFirstStage"
  | "AwaitRealization"
  | "AwaitSecondStage"
  | "Done";

export interface SessionJson {
  id: string;
  problem_id: string;
  stage: SessionStage;
  seed: number;
  x?: RationalJson[];
  omega?: string;
  y?: RationalJson[];
  outcome?: PointJson;
  outcome_gain_convention?: PointJson;
  outcome_minimal?: boolean;
}

export interface ApiErrorJson {
  code: string;
  message: string;
  path?: string;
}
