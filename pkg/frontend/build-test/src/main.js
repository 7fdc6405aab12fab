import { ApiClient } from "./api.js";
import { LabelingConsole, POLL_INTERVAL_MS } from "./console.js";
import { lookupTargets, renderAll } from "./render.js";
function bootstrap() {
    const targets = lookupTargets(document);
    const api = new ApiClient("");
    const console_ = new LabelingConsole(api, (state, busy) => renderAll(targets, state, busy, (label) => void console_.submit(label)));
    targets.submitButton.addEventListener("click", () => {
        const name = targets.newLabelInput.value;
        void console_.submit(name).then((ok) => {
            if (ok)
                targets.newLabelInput.value = "";
        });
    });
    targets.newLabelInput.addEventListener("keydown", (ev) => {
        if (ev.key === "Enter")
            targets.submitButton.click();
    });
    console_.start(POLL_INTERVAL_MS);
}
document.addEventListener("DOMContentLoaded", bootstrap);
