// Fixture-backed fetch stub: replays payloads recorded from the running
// service so the client and views are tested against the real contract.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture(name: string): any {
  return JSON.parse(readFileSync(join(here, "fixtures", `${name}.json`), "utf-8"));
}

type Route = { status: number; body: any };

export function stubFetch(routes: Record<string, Route | any>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  (globalThis as any).fetch = async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    const key = `${init?.method ?? "GET"} ${url}`;
    const hit = routes[key];
    if (hit === undefined) {
      throw new Error(`unexpected request: ${key}`);
    }
    const route: Route = "status" in hit && "body" in hit ? hit : { status: 200, body: hit };
    return {
      ok: route.status >= 200 && route.status < 300,
      status: route.status,
      statusText: String(route.status),
      json: async () => route.body,
    } as Response;
  };
  return calls;
}
