// Pure view-state machine. Every transition returns a new state object;
// the DOM layer renders whatever is here and nothing else, which is what
// keeps the invariants testable: one toast per event seq, one POST per
// submit click, form visible exactly while the daemon is pending.

import type { ApiEvent, ApiStatus, Profile } from "./types.js";
import { emptyProfile } from "./types.js";

export interface Toast {
    seq: number;
    kind: "safe_site" | "media_stream";
    text: string;
}

export interface PendingForm {
    networkId: string;
    profile: Profile;
    submitting: boolean;
    error: string | null;
}

export interface ViewState {
    status: ApiStatus | null;
    profiles: Record<string, Profile>;
    pendingForm: PendingForm | null;
    toasts: Toast[];
    feed: ApiEvent[];
    lastSeenSeq: number;
    banner: string | null;
}

export function initialState(): ViewState {
    return {
        status: null,
        profiles: {},
        pendingForm: null,
        toasts: [],
        feed: [],
        lastSeenSeq: 0,
        banner: null,
    };
}

function toastText(event: ApiEvent): string {
    if (event.kind === "safe_site") {
        return `Safe site: ${String(event.payload.url)}`;
    }
    const type = String(event.payload.content_type);
    const port = String(event.payload.dst_port);
    return `Media stream: ${type} on port ${port}`;
}

/** Fold one event into the state. Events at or below lastSeenSeq are
 * duplicates from overlapping polls and change nothing. */
export function applyEvent(state: ViewState, event: ApiEvent): ViewState {
    if (event.seq <= state.lastSeenSeq) {
        return state;
    }
    const next: ViewState = {
        ...state,
        feed: [...state.feed, event],
        lastSeenSeq: event.seq,
    };
    if (event.kind === "safe_site" || event.kind === "media_stream") {
        next.toasts = [
            ...state.toasts,
            { seq: event.seq, kind: event.kind, text: toastText(event) },
        ];
    } else if (event.kind === "unknown_network") {
        const networkId = String(event.payload.network_id);
        // Pre-fill the form with the announced id; keep edits if it is
        // already open for the same network.
        if (!state.pendingForm || state.pendingForm.networkId !== networkId) {
            next.pendingForm = {
                networkId,
                profile: emptyProfile(),
                submitting: false,
                error: null,
            };
        }
    }
    return next;
}

/** Reconcile with /status: the form is visible iff the daemon is pending. */
export function mergeStatus(state: ViewState, status: ApiStatus): ViewState {
    let pendingForm = state.pendingForm;
    if (status.state !== "pending") {
        pendingForm = null;
    } else if (
        status.network_id !== null &&
        (!pendingForm || pendingForm.networkId !== status.network_id)
    ) {
        pendingForm = {
            networkId: status.network_id,
            profile: emptyProfile(),
            submitting: false,
            error: null,
        };
    }
    return { ...state, status, pendingForm, banner: null };
}

export function setBanner(state: ViewState, banner: string): ViewState {
    return { ...state, banner };
}

export function editForm(state: ViewState, profile: Profile): ViewState {
    if (!state.pendingForm) return state;
    return { ...state, pendingForm: { ...state.pendingForm, profile } };
}

/** Returns null when a submit must not start (no form, or one in flight). */
export function beginSubmit(state: ViewState): ViewState | null {
    if (!state.pendingForm || state.pendingForm.submitting) {
        return null;
    }
    return {
        ...state,
        pendingForm: { ...state.pendingForm, submitting: true, error: null },
    };
}

export function submitFailed(state: ViewState, error: string): ViewState {
    if (!state.pendingForm) return state;
    return {
        ...state,
        pendingForm: { ...state.pendingForm, submitting: false, error },
    };
}

export function dismissToast(state: ViewState, seq: number): ViewState {
    return { ...state, toasts: state.toasts.filter((toast) => toast.seq !== seq) };
}

export function setProfiles(
    state: ViewState,
    profiles: Record<string, Profile>,
): ViewState {
    return { ...state, profiles };
}
