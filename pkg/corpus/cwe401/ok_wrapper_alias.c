void ok_wrapper_alias_do(int *x) {
    free(x);
}
int ok_wrapper_alias() {
    int *p = malloc(4);
    int *q;
    q = p;
    ok_wrapper_alias_do(q);
    return 0;
}
