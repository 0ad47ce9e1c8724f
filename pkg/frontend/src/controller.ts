// Sync loop and intents. Owns a ViewState, talks to the API client, and
// notifies the renderer after every transition. One long-poll in flight at
// a time; errors surface as a banner and back the poll off.

import type { ApiClient } from "./api.js";
import type { Profile } from "./types.js";
import {
    ViewState,
    applyEvent,
    beginSubmit,
    dismissToast,
    editForm,
    initialState,
    mergeStatus,
    setBanner,
    setProfiles,
    submitFailed,
} from "./state.js";

const MIN_BACKOFF_MS = 500;
const MAX_BACKOFF_MS = 10_000;

export class Dashboard {
    state: ViewState = initialState();
    backoffMs = MIN_BACKOFF_MS;

    constructor(
        private readonly client: ApiClient,
        private readonly onChange: (state: ViewState) => void = () => {},
    ) {}

    private update(state: ViewState): void {
        this.state = state;
        this.onChange(state);
    }

    /** One poll cycle: drain new events, then reconcile status + profiles. */
    async pollOnce(timeoutSecs = 25): Promise<void> {
        try {
            const batch = await this.client.events(this.state.lastSeenSeq, timeoutSecs);
            let state = this.state;
            for (const event of batch.events) {
                state = applyEvent(state, event);
            }
            state = mergeStatus(state, await this.client.status());
            state = setProfiles(state, await this.client.profiles());
            this.backoffMs = MIN_BACKOFF_MS;
            this.update(state);
        } catch (error) {
            this.backoffMs = Math.min(this.backoffMs * 2, MAX_BACKOFF_MS);
            this.update(setBanner(this.state, `API unreachable: ${String(error)}`));
        }
    }

    async runForever(): Promise<never> {
        for (;;) {
            await this.pollOnce();
            if (this.state.banner !== null) {
                await new Promise((resolve) => setTimeout(resolve, this.backoffMs));
            }
        }
    }

    editPendingProfile(profile: Profile): void {
        this.update(editForm(this.state, profile));
    }

    /** Submit the pending-network form; ignored while a POST is in flight.
     * Returns true when the daemon accepted the profile. */
    async submitPendingForm(): Promise<boolean> {
        const started = beginSubmit(this.state);
        if (started === null) {
            return false;
        }
        const form = started.pendingForm!;
        this.update(started);
        try {
            await this.client.submitPending(form.networkId, form.profile);
        } catch (error) {
            const message = error instanceof Error ? error.message : String(error);
            this.update(submitFailed(this.state, message));
            return false;
        }
        // On success the daemon flips to known; reconciling closes the form.
        let state = mergeStatus(this.state, await this.client.status());
        state = setProfiles(state, await this.client.profiles());
        this.update(state);
        return true;
    }

    dismissToast(seq: number): void {
        this.update(dismissToast(this.state, seq));
    }
}
