int main()
{
    int n;
    int i = 0;
    int even = 0;
    int odd = 0;
    while (i < 12) {
        if (i % 2 == 0) even++;
        else odd++;
        i++;
    }
    MYASSERT(even + odd == 12);
    return 0;
}
