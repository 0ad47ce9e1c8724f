// Boot: resolve the API address, start the sync loop, render on change.
// Served from the daemon itself (/ui/) the API is same-origin; a ?api=
// query parameter points elsewhere for development.

import { createApiClient } from "./api.js";
import { Dashboard } from "./controller.js";
import { render } from "./ui.js";

function apiBase(): string {
    const override = new URLSearchParams(window.location.search).get("api");
    if (override) {
        return override.startsWith("http") ? override : `http://${override}`;
    }
    return window.location.origin;
}

function boot(): void {
    const root = document.getElementById("app");
    if (!root) throw new Error("missing #app element");
    const dashboard = new Dashboard(createApiClient(apiBase()), () =>
        render(root, dashboard),
    );
    render(root, dashboard);
    void dashboard.runForever();
}

document.addEventListener("DOMContentLoaded", boot);
