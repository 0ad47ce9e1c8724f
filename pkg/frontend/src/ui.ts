// DOM rendering. Dumb by design: re-renders sections from ViewState and
// forwards user intents to the Dashboard controller.

import type { Dashboard } from "./controller.js";
import type { ViewState } from "./state.js";
import type { Profile } from "./types.js";

export function render(root: HTMLElement, dashboard: Dashboard): void {
    const state = dashboard.state;
    renderBanner(root, state);
    renderStatus(root, state);
    renderForm(root, state, dashboard);
    renderToasts(root, state, dashboard);
    renderProfiles(root, state);
    renderFeed(root, state);
}

function section(root: HTMLElement, id: string): HTMLElement {
    let node = root.querySelector<HTMLElement>(`#${id}`);
    if (!node) {
        node = document.createElement("div");
        node.id = id;
        root.appendChild(node);
    }
    return node;
}

function renderBanner(root: HTMLElement, state: ViewState): void {
    const node = section(root, "banner");
    node.className = "banner";
    node.hidden = state.banner === null;
    node.textContent = state.banner ?? "";
}

function renderStatus(root: HTMLElement, state: ViewState): void {
    const node = section(root, "status");
    node.className = "card";
    if (!state.status) {
        node.textContent = "Connecting to daemon...";
        return;
    }
    const { state: phase, network_id, is_home } = state.status;
    node.innerHTML = "";
    const title = document.createElement("h2");
    title.textContent = "Current network";
    const body = document.createElement("p");
    body.className = `phase phase-${phase}`;
    body.textContent =
        phase === "disconnected"
            ? "Disconnected"
            : `${phase === "pending" ? "New network" : "Known network"}: ${network_id}` +
              (is_home ? " (home)" : "");
    node.append(title, body);
}

function formField(
    label: string,
    value: string,
    onInput: (value: string) => void,
): HTMLLabelElement {
    const wrap = document.createElement("label");
    wrap.textContent = label;
    const input = document.createElement("input");
    input.type = "text";
    input.value = value;
    input.addEventListener("input", () => onInput(input.value));
    wrap.appendChild(input);
    return wrap;
}

function parseMediaLines(text: string): Record<string, string> {
    const media: Record<string, string> = {};
    for (const line of text.split("\n")) {
        if (!line.trim()) continue;
        const eq = line.indexOf("=");
        // Send malformed lines through as-is; the daemon's validation
        // answers with the authoritative error message.
        if (eq < 0) {
            media[line.trim()] = "";
        } else {
            media[line.slice(0, eq).trim()] = line.slice(eq + 1).trim();
        }
    }
    return media;
}

function mediaLines(media: Record<string, string>): string {
    return Object.entries(media)
        .map(([mime, app]) => `${mime}=${app}`)
        .join("\n");
}

function renderForm(root: HTMLElement, state: ViewState, dashboard: Dashboard): void {
    const node = section(root, "pending-form");
    node.className = "card form";
    node.hidden = state.pendingForm === null;
    node.innerHTML = "";
    const form = state.pendingForm;
    if (!form) return;

    const title = document.createElement("h2");
    title.textContent = `New network: ${form.networkId}`;
    node.appendChild(title);

    const hint = document.createElement("p");
    hint.textContent = "Choose the application settings for this network.";
    node.appendChild(hint);

    const profile: Profile = { ...form.profile };
    const edit = (patch: Partial<Profile>) =>
        dashboard.editPendingProfile({ ...dashboard.state.pendingForm!.profile, ...patch });

    node.appendChild(
        formField("Display name", profile.display_name, (v) => edit({ display_name: v })),
    );
    node.appendChild(
        formField("Browser homepage", profile.homepage_url, (v) => edit({ homepage_url: v })),
    );
    node.appendChild(
        formField("Messenger account", profile.messenger_account, (v) =>
            edit({ messenger_account: v }),
        ),
    );
    node.appendChild(
        formField("Email command", profile.email_command, (v) => edit({ email_command: v })),
    );

    const mediaLabel = document.createElement("label");
    mediaLabel.textContent = "Default media apps (one mime=app per line)";
    const media = document.createElement("textarea");
    media.rows = 3;
    media.value = mediaLines(profile.default_media);
    media.addEventListener("input", () =>
        edit({ default_media: parseMediaLines(media.value) }),
    );
    mediaLabel.appendChild(media);
    node.appendChild(mediaLabel);

    const homeLabel = document.createElement("label");
    homeLabel.className = "checkbox";
    const home = document.createElement("input");
    home.type = "checkbox";
    home.checked = profile.is_home;
    home.addEventListener("change", () => edit({ is_home: home.checked }));
    homeLabel.append(home, document.createTextNode(" This is my home network"));
    node.appendChild(homeLabel);

    if (form.error) {
        const error = document.createElement("p");
        error.className = "error";
        error.textContent = form.error;
        node.appendChild(error);
    }

    const submit = document.createElement("button");
    submit.textContent = form.submitting ? "Saving..." : "Save profile";
    submit.disabled = form.submitting;
    submit.addEventListener("click", () => void dashboard.submitPendingForm());
    node.appendChild(submit);
}

function renderToasts(root: HTMLElement, state: ViewState, dashboard: Dashboard): void {
    const node = section(root, "toasts");
    node.className = "toasts";
    node.innerHTML = "";
    for (const toast of state.toasts) {
        const item = document.createElement("div");
        item.className = `toast toast-${toast.kind}`;
        item.dataset.seq = String(toast.seq);
        const text = document.createElement("span");
        text.textContent = toast.text;
        const close = document.createElement("button");
        close.textContent = "×";
        close.addEventListener("click", () => dashboard.dismissToast(toast.seq));
        item.append(text, close);
        node.appendChild(item);
    }
}

function renderProfiles(root: HTMLElement, state: ViewState): void {
    const node = section(root, "profiles");
    node.className = "card";
    node.innerHTML = "";
    const title = document.createElement("h2");
    title.textContent = "Stored networks";
    node.appendChild(title);
    const ids = Object.keys(state.profiles).sort();
    if (ids.length === 0) {
        const empty = document.createElement("p");
        empty.textContent = "No networks stored yet.";
        node.appendChild(empty);
        return;
    }
    const list = document.createElement("ul");
    for (const id of ids) {
        const profile = state.profiles[id];
        const item = document.createElement("li");
        const name = profile.display_name || "(unnamed)";
        item.textContent = `${name} — ${id}${profile.is_home ? " (home)" : ""}`;
        list.appendChild(item);
    }
    node.appendChild(list);
}

function renderFeed(root: HTMLElement, state: ViewState): void {
    const node = section(root, "feed");
    node.className = "card";
    node.innerHTML = "";
    const title = document.createElement("h2");
    title.textContent = "Events";
    node.appendChild(title);
    const list = document.createElement("ol");
    for (const event of [...state.feed].reverse()) {
        const item = document.createElement("li");
        item.textContent = `#${event.seq} ${event.kind} ${JSON.stringify(event.payload)}`;
        list.appendChild(item);
    }
    node.appendChild(list);
}
