// Thin typed client over the decision-service endpoints.

import type {
  ApiErrorJson,
  EvpiJson,
  PolyhedronJson,
  RationalJson,
  SessionJson,
  SetSolutionJson,
  SurrogatesJson,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly body: ApiErrorJson,
  ) {
    super(body.message);
  }
}

export class Client {
  constructor(
    readonly base = "",
    readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const res = await this.fetchFn(`${this.base}${path}`, {
      method,
      headers: body === undefined
        ? undefined
        : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await res.json();
    if (!res.ok) {
      throw new ServiceError(res.status, payload as ApiErrorJson);
    }
    return payload as T;
  }

  postProblem(doc: unknown): Promise<{ id: string }> {
    return this.request("POST", "/api/problems", doc);
  }

  upperImage(pid: string): Promise<PolyhedronJson> {
    return this.request("GET", `/api/problems/${pid}/upper-image`);
  }

  solution(pid: string): Promise<SetSolutionJson> {
    return this.request("GET", `/api/problems/${pid}/solution`);
  }

  flexibility(pid: string, x: RationalJson[]): Promise<PolyhedronJson> {
    return this.request("POST", `/api/problems/${pid}/f`, { x });
  }

  surrogates(pid: string): Promise<SurrogatesJson> {
    return this.request("GET", `/api/problems/${pid}/surrogates`);
  }

  evpi(pid: string, v: RationalJson[]): Promise<EvpiJson> {
    return this.request("POST", `/api/problems/${pid}/evpi`, { v });
  }

  createSession(pid: string, seed?: number): Promise<SessionJson> {
    return this.request(
      "POST",
      `/api/problems/${pid}/sessions`,
      seed === undefined ? {} : { seed },
    );
  }

  firstStage(sid: string, x: RationalJson[]): Promise<SessionJson> {
    return this.request("POST", `/api/sessions/${sid}/first-stage`, { x });
  }

  realize(
    sid: string,
    choice: { omega: string } | { random: true },
  ): Promise<SessionJson> {
    return this.request("POST", `/api/sessions/${sid}/realize`, choice);
  }

  secondStage(sid: string): Promise<PolyhedronJson> {
    return this.request("GET", `/api/sessions/${sid}/second-stage`);
  }

  choose(sid: string, y: RationalJson[]): Promise<SessionJson> {
    return this.request("POST", `/api/sessions/${sid}/choose`, { y });
  }
}
