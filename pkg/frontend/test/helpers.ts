import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(
    readFileSync(join(here, "fixtures", `${name}.json`), "utf-8"),
  ) as T;
}

export function fixtureText(name: string): string {
  return readFileSync(join(here, "fixtures", `${name}.json`), "utf-8");
}

type Handler = (body: unknown) => { status?: number; payload: unknown };

/** Minimal fetch stand-in with a method+path routing table. */
export function mockFetch(routes: Record<string, Handler>): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const key = `${method} ${url}`;
    const handler = routes[key];
    if (!handler) {
      throw new Error(`unrouted request: ${key}`);
    }
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    const { status = 200, payload } = handler(body);
    return {
      ok: status >= 200 && status < 300,
      status,
      json: async () => payload,
    } as Response;
  }) as typeof fetch;
}
