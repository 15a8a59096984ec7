void ok_out_param_fill(int **out) {
    *out = malloc(4);
}
int ok_out_param() {
    int *slot;
    ok_out_param_fill(&slot);
    return 0;
}
