// Wire types of the daemon's control API. Field names mirror the daemon's
// domain types; the dashboard adds no validation of its own.

export interface ApiStatus {
    state: "disconnected" | "known" | "pending";
    network_id: string | null;
    is_home: boolean;
}

export interface Profile {
    display_name: string;
    homepage_url: string;
    default_media: Record<string, string>;
    messenger_account: string;
    email_command: string;
    is_home: boolean;
}

export type EventKind =
    | "unknown_network"
    | "profile_applied"
    | "safe_site"
    | "media_stream";

export interface ApiEvent {
    seq: number;
    kind: EventKind;
    ts: number;
    payload: Record<string, unknown>;
}

export interface EventBatch {
    events: ApiEvent[];
    latest_seq: number;
}

export function emptyProfile(): Profile {
    return {
        display_name: "",
        homepage_url: "",
        default_media: {},
        messenger_account: "",
        email_command: "",
        is_home: false,
    };
}
