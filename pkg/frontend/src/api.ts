// Thin fetch wrapper around the daemon API. The fetch function is injected
// so tests can script the daemon's behavior.

import type { ApiStatus, EventBatch, Profile } from "./types.js";

export interface ApiClient {
    status(): Promise<ApiStatus>;
    profiles(): Promise<Record<string, Profile>>;
    putProfile(networkId: string, profile: Profile): Promise<void>;
    submitPending(networkId: string, profile: Profile): Promise<void>;
    events(since: number, timeoutSecs: number): Promise<EventBatch>;
}

export class ApiRequestError extends Error {
    constructor(readonly code: number, message: string) {
        super(message);
    }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export function createApiClient(base: string, fetchFn?: FetchLike): ApiClient {
    const doFetch: FetchLike = fetchFn ?? ((input, init) => fetch(input, init));

    async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
            init.headers = { "Content-Type": "application/json" };
        }
        const response = await doFetch(base + path, init);
        const text = await response.text();
        if (!response.ok) {
            // Error documents carry {code, message}; surface the message verbatim.
            let message = `HTTP ${response.status}`;
            try {
                const doc = JSON.parse(text);
                if (typeof doc.message === "string") message = doc.message;
            } catch {
                /* non-JSON error body */
            }
            throw new ApiRequestError(response.status, message);
        }
        return JSON.parse(text) as T;
    }

    return {
        status: () => request<ApiStatus>("GET", "/status"),
        profiles: async () => {
            const doc = await request<{ profiles: Record<string, Profile> }>(
                "GET",
                "/profiles",
            );
            return doc.profiles;
        },
        putProfile: async (networkId, profile) => {
            await request("PUT", `/profiles/${networkId}`, profile);
        },
        submitPending: async (networkId, profile) => {
            await request("POST", `/pending/${networkId}/profile`, profile);
        },
        events: (since, timeoutSecs) =>
            request<EventBatch>(
                "GET",
                `/events?since=${since}&timeout=${timeoutSecs}`,
            ),
    };
}
